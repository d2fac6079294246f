use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use crate::CliError;

pub const OUT_ENV: &str = "WGREEDY_OUT";
pub const DEFAULT_OUT: &str = "wgreedy-out";

/// `--out`, then the config's own directory, then `$WGREEDY_OUT`, then `./wgreedy-out`.
pub fn resolve_out_dir(flag: Option<PathBuf>, config: Option<PathBuf>) -> PathBuf {
    flag.or(config)
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

/// Writes `dir/name` through a temporary file in the same directory and renames it into place.
pub fn write_atomic<F>(dir: &Path, name: &str, fill: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    std::fs::create_dir_all(dir)?;
    let tmp = NamedTempFile::new_in(dir)?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        fill(&mut w)?;
        w.flush()?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(dir.join(name)).map_err(|e| CliError::from(e.error))?;
    Ok(())
}

pub fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), CliError> {
    write_atomic(dir, name, |w| {
        serde_json::to_writer_pretty(&mut *w, value)
            .map_err(|e| CliError::Numerical(format!("json: {e}")))?;
        w.write_all(b"\n")?;
        Ok(())
    })
}
