//! Experiment configuration (TOML).
//!
//! ```toml
//! seed = 7
//!
//! [set]
//! kind = "diagonal_poly"
//! count = 64
//! big_c0 = 1.0
//! alpha = 1.0
//!
//! [norm]
//! kind = "l2"
//!
//! [greedy]
//! gamma = 1.0
//! n_max = 64
//!
//! [widths]
//! methods = ["analytic", "svd"]
//!
//! [bounds]
//! theorems = true
//! corollaries = ["C1_i", "C1_ii"]
//! alpha = 1.0
//! big_c0 = 1.0
//! ```

use std::path::{Path as FsPath, PathBuf};

use serde::Deserialize;
use wgreedy::bounds::{Corollary, RateParams};
use wgreedy::greedy::{Path, Policy, WeakGreedyParams, DEFAULT_TERMINATION_EPS};
use wgreedy::rng;
use wgreedy::widths::WidthMethod;
use wgreedy::{CompactSetSpec, NormKind};

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<u64>,
    set: toml::Table,
    norm: Option<NormSection>,
    #[serde(default)]
    greedy: GreedySection,
    #[serde(default)]
    widths: WidthsSection,
    #[serde(default)]
    bounds: BoundsSection,
    #[serde(default)]
    output: OutputSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct NormSection {
    kind: String,
    p: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GreedySection {
    gamma: Option<f64>,
    n_max: Option<usize>,
    policy: Option<Policy>,
    termination_eps: Option<f64>,
    path: Option<String>,
    solver_tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct WidthsSection {
    methods: Option<Vec<String>>,
    n_max: Option<usize>,
    brute_force_grid: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundsSection {
    #[serde(default)]
    theorems: bool,
    k_max: Option<usize>,
    #[serde(default)]
    corollaries: Vec<String>,
    alpha: Option<f64>,
    beta: Option<f64>,
    big_c0: Option<f64>,
    small_c0: Option<f64>,
    constant_scale: Option<f64>,
    c1_prime: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    dir: Option<PathBuf>,
}

/// Validated experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub seed: Option<u64>,
    pub set: CompactSetSpec,
    pub norm: NormKind,
    pub greedy: WeakGreedyParams,
    pub path: Option<Path>,
    pub width_methods: Vec<WidthMethod>,
    pub widths_n_max: usize,
    pub theorems: bool,
    pub k_max: usize,
    pub corollaries: Vec<Corollary>,
    pub rate: Option<RateParams>,
    pub output_dir: Option<PathBuf>,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub fn parse_norm(kind: &str, p: Option<f64>) -> Result<NormKind, CliError> {
    let k = match kind {
        "l2" | "hilbert" => NormKind::Hilbert,
        "l1" => NormKind::L1,
        "linf" => NormKind::LInf,
        "lp" => NormKind::lp(p.ok_or_else(|| bad("norm kind lp needs p"))?)
            .map_err(|e| bad(e.to_string()))?,
        other => match other.strip_prefix('l').and_then(|s| s.parse::<f64>().ok()) {
            Some(p) => NormKind::lp(p).map_err(|e| bad(e.to_string()))?,
            None => return Err(bad(format!("unknown norm kind {other:?}"))),
        },
    };
    Ok(k)
}

fn get<T: for<'de> Deserialize<'de>>(t: &toml::Table, key: &str) -> Result<T, CliError> {
    t.get(key)
        .ok_or_else(|| bad(format!("[set] is missing {key:?}")))?
        .clone()
        .try_into()
        .map_err(|e| bad(format!("[set].{key}: {e}")))
}

/// Resolves the `[set]` table, including the generated diagonal and matrix
/// shorthands; randomized kinds fall back to a seed derived from the master seed.
fn parse_set(t: &toml::Table, seed: Option<u64>) -> Result<CompactSetSpec, CliError> {
    let kind: String = get(t, "kind")?;
    let local_seed = |t: &toml::Table| -> Result<u64, CliError> {
        match t.get("seed") {
            Some(v) => v.clone().try_into().map_err(|e| bad(format!("[set].seed: {e}"))),
            None => seed
                .map(|s| rng::derive_seed(s, "set"))
                .ok_or_else(|| bad(format!("set kind {kind:?} is randomized and needs a seed"))),
        }
    };
    let spec = match kind.as_str() {
        "diagonal_poly" => CompactSetSpec::diagonal_poly(
            get(t, "count")?,
            get(t, "big_c0")?,
            get(t, "alpha")?,
        ),
        "diagonal_exp" => CompactSetSpec::diagonal_exp(
            get(t, "count")?,
            get(t, "big_c0")?,
            get(t, "small_c0")?,
            get(t, "alpha")?,
        ),
        "synthetic_matrix" => CompactSetSpec::synthetic_from_matrix(
            get(t, "size")?,
            get(t, "gamma")?,
            get(t, "decay")?,
            get(t, "scale")?,
            local_seed(t)?,
        ),
        "random_ball" => {
            let known = ["kind", "dim", "count", "seed"];
            if let Some(k) = t.keys().find(|k| !known.contains(&k.as_str())) {
                return Err(bad(format!("[set]: unknown field {k:?}")));
            }
            CompactSetSpec::RandomBall {
                dim: get(t, "dim")?,
                count: get(t, "count")?,
                seed: local_seed(t)?,
            }
        }
        _ => toml::Value::Table(t.clone())
            .try_into()
            .map_err(|e| bad(format!("[set]: {e}")))?,
    };
    Ok(spec)
}

fn parse_methods(names: &[String], grid: usize) -> Result<Vec<WidthMethod>, CliError> {
    names
        .iter()
        .map(|n| match n.as_str() {
            "analytic" => Ok(WidthMethod::Analytic),
            "svd" => Ok(WidthMethod::Svd),
            "greedy" => Ok(WidthMethod::Greedy),
            "brute_force" => Ok(WidthMethod::BruteForce { grid }),
            other => Err(bad(format!("unknown width method {other:?}"))),
        })
        .collect()
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        Self::from_raw(raw)
    }

    pub fn load(path: &FsPath) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Replaces the master seed; randomized set kinds without their own seed follow it.
    pub fn with_seed(text: &str, seed: u64) -> Result<Self, CliError> {
        let mut raw: RawConfig = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        raw.seed = Some(seed);
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawConfig) -> Result<Self, CliError> {
        let set = parse_set(&raw.set, raw.seed)?;
        let norm = match &raw.norm {
            Some(n) => parse_norm(&n.kind, n.p)?,
            None => NormKind::Hilbert,
        };
        let g = &raw.greedy;
        let count = set_len(&set);
        let n_max = g.n_max.unwrap_or(count).min(count);
        let mut greedy = WeakGreedyParams::new(n_max)
            .gamma(g.gamma.unwrap_or(1.0))
            .policy(g.policy.unwrap_or(Policy::Argmax))
            .termination_eps(g.termination_eps.unwrap_or(DEFAULT_TERMINATION_EPS));
        if let Some(tol) = g.solver_tol {
            greedy.solver.tol = tol;
        }
        if !(greedy.gamma > 0.0 && greedy.gamma <= 1.0) {
            return Err(bad(format!("gamma must lie in (0, 1], got {}", greedy.gamma)));
        }
        let path = match g.path.as_deref() {
            None | Some("auto") => None,
            Some("hilbert") => Some(Path::Hilbert),
            Some("banach") => Some(Path::Banach),
            Some(other) => return Err(bad(format!("unknown greedy path {other:?}"))),
        };
        if path == Some(Path::Hilbert) && norm != NormKind::Hilbert {
            return Err(bad("the hilbert path needs norm l2"));
        }

        let w = &raw.widths;
        let default_methods = vec!["analytic".to_string(), "svd".to_string()];
        let width_methods = parse_methods(
            w.methods.as_ref().unwrap_or(&default_methods),
            w.brute_force_grid.unwrap_or(400),
        )?;
        let widths_n_max = w.n_max.unwrap_or(n_max);

        let b = &raw.bounds;
        let corollaries = b
            .corollaries
            .iter()
            .map(|c| Corollary::parse(c).ok_or_else(|| bad(format!("unknown corollary {c:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let hilbert_only = [Corollary::C1I, Corollary::C1Ii, Corollary::C1Iii];
        if norm != NormKind::Hilbert && corollaries.iter().any(|c| hilbert_only.contains(c)) {
            return Err(bad("C1_* corollaries need norm l2"));
        }
        let rate = if corollaries.is_empty() {
            None
        } else {
            let mut r = RateParams::new(
                b.alpha.ok_or_else(|| bad("[bounds] needs alpha for corollary checks"))?,
                b.big_c0.unwrap_or(1.0),
                b.small_c0.unwrap_or(1.0),
                greedy.gamma,
            );
            r.beta = b.beta;
            r.constant_scale = b.constant_scale.unwrap_or(1.0);
            r.c1_prime = b.c1_prime;
            if corollaries.contains(&Corollary::C2Ii) {
                r.c1_banach_poly().map_err(|e| bad(e.to_string()))?;
            }
            Some(r)
        };

        Ok(Self {
            seed: raw.seed,
            set,
            norm,
            greedy,
            path,
            width_methods,
            widths_n_max,
            theorems: b.theorems,
            k_max: b.k_max.unwrap_or(6),
            corollaries,
            rate,
            output_dir: raw.output.dir,
        })
    }
}

fn set_len(spec: &CompactSetSpec) -> usize {
    match spec {
        CompactSetSpec::Diagonal { x } => x.len(),
        CompactSetSpec::FromMatrix { a, .. } => a.len(),
        CompactSetSpec::DyadicBlocks { levels, .. } => 1usize << levels,
        CompactSetSpec::RandomBall { count, .. } => *count,
        CompactSetSpec::ParametricSurrogate { count, .. } => *count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_config() {
        let c = ExperimentConfig::from_toml(
            r#"
            [set]
            kind = "diagonal"
            x = [1.0, 0.5, 0.25]
            "#,
        )
        .unwrap();
        assert_eq!(c.norm, NormKind::Hilbert);
        assert_eq!(c.greedy.n_max, 3);
        assert_eq!(c.width_methods, vec![WidthMethod::Analytic, WidthMethod::Svd]);
    }

    #[test]
    fn randomized_sets_need_a_seed() {
        let text = r#"
            [set]
            kind = "random_ball"
            dim = 4
            count = 5
        "#;
        assert!(matches!(ExperimentConfig::from_toml(text), Err(CliError::Config(_))));
        let a = ExperimentConfig::with_seed(text, 3).unwrap();
        let b = ExperimentConfig::with_seed(text, 3).unwrap();
        assert_eq!(a.set, b.set);
        assert_ne!(a.set, ExperimentConfig::with_seed(text, 4).unwrap().set);
    }

    #[test]
    fn norm_names() {
        assert_eq!(parse_norm("l3", None).unwrap(), NormKind::Lp(3.0));
        assert_eq!(parse_norm("lp", Some(1.5)).unwrap(), NormKind::Lp(1.5));
        assert_eq!(parse_norm("linf", None).unwrap(), NormKind::LInf);
        assert!(parse_norm("l0.5", None).is_err());
        assert!(parse_norm("sup", None).is_err());
    }

    #[test]
    fn rejects_inconsistent_sections() {
        let text = r#"
            [set]
            kind = "diagonal"
            x = [1.0, 0.5]
            [norm]
            kind = "linf"
            [bounds]
            corollaries = ["C1_i"]
            alpha = 1.0
        "#;
        assert!(ExperimentConfig::from_toml(text).is_err());
        assert!(ExperimentConfig::from_toml("[set]\nkind = \"diagonal\"\nx = [1.0]\n[greedy]\ngamma = 0.0\n").is_err());
        assert!(ExperimentConfig::from_toml("[set]\nkind = \"diagonal\"\nx = [1.0]\nbogus = 1\n").is_err());
    }
}
