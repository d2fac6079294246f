use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wgreedy_cli::commands::{self, LowerboundParams};
use wgreedy_cli::config::ExperimentConfig;
use wgreedy_cli::output::resolve_out_dir;
use wgreedy_cli::{CliError, Exit};

#[derive(Parser)]
#[command(name = "wgreedy", version, about = "Weak greedy versus Kolmogorov width experiments")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run greedy, widths and bound checks from a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (default: config, then $WGREEDY_OUT, then ./wgreedy-out).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Master seed, overriding the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Greedy errors against random-subspace widths on the dyadic-blocks set.
    Lowerbound {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 5)]
        levels: u32,
        #[arg(long, default_value_t = 16)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized check of the lower-triangular determinant inequality.
    LemmaFuzz {
        #[arg(long, default_value_t = 8)]
        k_max: usize,
        #[arg(long, default_value_t = 1000)]
        draws: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Width bounds only.
    Widths {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Summarize a previous run directory.
    Report {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &PathBuf, seed: Option<u64>) -> Result<ExperimentConfig, CliError> {
    match seed {
        None => ExperimentConfig::load(path),
        Some(s) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            ExperimentConfig::with_seed(&text, s)
        }
    }
}

fn dispatch(cmd: Command) -> Result<Exit, CliError> {
    match cmd {
        Command::Run { config, out, seed } => {
            let cfg = load(&config, seed)?;
            let out = resolve_out_dir(out, cfg.output_dir.clone());
            commands::cmd_run(&cfg, &out)
        }
        Command::Lowerbound {
            alpha,
            levels,
            trials,
            seed,
            out,
        } => {
            let p = LowerboundParams {
                alpha,
                levels,
                trials,
                seed,
            };
            commands::cmd_lowerbound(&p, &resolve_out_dir(out, None))
        }
        Command::LemmaFuzz {
            k_max,
            draws,
            seed,
            out,
        } => commands::cmd_lemma_fuzz(k_max, draws, seed, &resolve_out_dir(out, None)),
        Command::Widths { config, out, seed } => {
            let cfg = load(&config, seed)?;
            let out = resolve_out_dir(out, cfg.output_dir.clone());
            commands::cmd_widths(&cfg, &out)
        }
        Command::Report { out } => commands::cmd_report(&resolve_out_dir(out, None)),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("cannot configure thread pool: {e}");
            return ExitCode::from(Exit::Config.code() as u8);
        }
    }
    let exit = match dispatch(cli.command) {
        Ok(exit) => exit,
        Err(e) => {
            eprintln!("wgreedy: {e}");
            e.exit()
        }
    };
    ExitCode::from(exit.code() as u8)
}
