use std::path::Path as FsPath;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use wgreedy::bounds::{corollary_checks, lemma1_check, theorem_sweep, BoundReport, LemmaInstance, Verdict};
use wgreedy::export;
use wgreedy::greedy::{run_weak_greedy, run_weak_greedy_on, GreedyTrace, Path, WeakGreedyParams};
use wgreedy::rng;
use wgreedy::widths::{assemble_widths, width_upper_random_subspace, RandomSubspaceWidth, WidthSequence};
use wgreedy::{realize, CompactSet, CompactSetSpec, NormKind};

use crate::config::ExperimentConfig;
use crate::output::{write_atomic, write_json};
use crate::{CliError, Exit};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct BoundCounts {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub unmet: usize,
    pub exploratory: usize,
    /// Smallest slack among stated (non-exploratory) checks with a verdict.
    pub worst: Option<WorstBound>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WorstBound {
    pub name: String,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    #[serde(rename = "K")]
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub slack_log: f64,
}

impl BoundCounts {
    pub fn from_reports(reports: &[BoundReport]) -> Self {
        let mut c = BoundCounts {
            total: reports.len(),
            ..Default::default()
        };
        for r in reports {
            if r.exploratory {
                c.exploratory += 1;
                continue;
            }
            match r.verdict {
                Verdict::Pass => c.pass += 1,
                Verdict::Fail => c.fail += 1,
                Verdict::HypothesisUnmet => {
                    c.unmet += 1;
                    continue;
                }
            }
            let s = r.slack_log();
            if c.worst.as_ref().is_none_or(|w| s < w.slack_log) {
                c.worst = Some(WorstBound {
                    name: r.name.clone(),
                    n: r.n,
                    k: r.k,
                    m: r.m,
                    slack_log: s,
                });
            }
        }
        c
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditSummary {
    pub monotone: bool,
    pub p1_violations: usize,
    pub p2_violations: usize,
    pub entries_violations: usize,
    pub functional_approximate: bool,
    pub max_annihilation_defect: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub command: String,
    pub set: CompactSetSpec,
    pub norm: String,
    pub path: Path,
    pub gamma: f64,
    pub n_max: usize,
    pub seed: Option<u64>,
    pub selected: Vec<usize>,
    pub terminated: bool,
    pub audit: AuditSummary,
    pub widths_consistent: bool,
    pub bounds: BoundCounts,
    pub exit_code: i32,
}

/// Everything `run` computes, before anything is written.
pub struct RunArtifacts {
    pub set: CompactSet,
    pub trace: GreedyTrace,
    pub sigmas: Vec<f64>,
    pub widths: WidthSequence,
    pub reports: Vec<BoundReport>,
    pub summary: RunSummary,
}

/// Greedy sigmas with zero padding up to `σ_{n_max}` when the run terminated early.
pub fn padded_sigmas(trace: &GreedyTrace, n_max: usize) -> Vec<f64> {
    if trace.terminated {
        trace.sigmas_padded(n_max + 1)
    } else {
        trace.sigmas.clone()
    }
}

pub fn execute_run(cfg: &ExperimentConfig) -> Result<RunArtifacts, CliError> {
    let set = realize(&cfg.set, cfg.norm)?;
    let trace = match cfg.path {
        Some(p) => run_weak_greedy_on(&set, &cfg.greedy, p)?,
        None => run_weak_greedy(&set, &cfg.greedy)?,
    };
    let widths = assemble_widths(&set, cfg.widths_n_max, &cfg.width_methods)?;
    let sigmas = padded_sigmas(&trace, cfg.greedy.n_max.max(cfg.widths_n_max));

    let mut reports = Vec::new();
    if cfg.theorems {
        let path = if set.norm_kind == NormKind::Hilbert {
            trace.path
        } else {
            Path::Banach
        };
        reports.extend(theorem_sweep(&sigmas, &widths, cfg.greedy.gamma, cfg.k_max, path)?);
    }
    if let Some(rate) = &cfg.rate {
        reports.extend(corollary_checks(&sigmas, &widths, rate, &cfg.corollaries)?);
    }
    let tol_note = format!("solver_tol={:e}", trace.audit_tol);
    for r in &mut reports {
        r.notes = if r.notes.is_empty() {
            tol_note.clone()
        } else {
            format!("{}; {tol_note}", r.notes)
        };
    }

    let audit = trace.audit();
    let audit_summary = AuditSummary {
        monotone: audit.monotone,
        p1_violations: audit.p1.len(),
        p2_violations: audit.p2.len(),
        entries_violations: audit.entries.len(),
        functional_approximate: audit.functional_approximate,
        max_annihilation_defect: trace.max_annihilation_defect,
        tolerance: trace.audit_tol,
    };
    let counts = BoundCounts::from_reports(&reports);
    let widths_consistent = widths.is_consistent(1e-6);
    let exit = if counts.fail > 0 || !audit.passed() || !widths_consistent {
        Exit::BoundFailure
    } else {
        Exit::Ok
    };
    let summary = RunSummary {
        command: "run".into(),
        set: cfg.set.clone(),
        norm: cfg.norm.to_string(),
        path: trace.path,
        gamma: cfg.greedy.gamma,
        n_max: cfg.greedy.n_max,
        seed: cfg.seed,
        selected: trace.selected.clone(),
        terminated: trace.terminated,
        audit: audit_summary,
        widths_consistent,
        bounds: counts,
        exit_code: exit.code(),
    };
    Ok(RunArtifacts {
        set,
        trace,
        sigmas,
        widths,
        reports,
        summary,
    })
}

pub fn write_run(art: &RunArtifacts, out: &FsPath) -> Result<(), CliError> {
    write_atomic(out, "sigmas.csv", |w| Ok(export::write_sigmas(w, &art.trace.sigmas)?))?;
    write_atomic(out, "A.csv", |w| Ok(export::write_trace_matrix(w, &art.trace)?))?;
    write_atomic(out, "widths.csv", |w| Ok(export::write_widths(w, &art.widths)?))?;
    write_atomic(out, "bounds.csv", |w| Ok(export::write_bounds(w, &art.reports)?))?;
    write_json(out, "summary.json", &art.summary)
}

pub fn cmd_run(cfg: &ExperimentConfig, out: &FsPath) -> Result<Exit, CliError> {
    let art = execute_run(cfg)?;
    write_run(&art, out)?;
    let s = &art.summary;
    log::info!(
        "{} selections, bounds: {} pass, {} fail, {} unmet",
        s.selected.len(),
        s.bounds.pass,
        s.bounds.fail,
        s.bounds.unmet
    );
    Ok(if s.exit_code == 0 { Exit::Ok } else { Exit::BoundFailure })
}

pub fn cmd_widths(cfg: &ExperimentConfig, out: &FsPath) -> Result<Exit, CliError> {
    let set = realize(&cfg.set, cfg.norm)?;
    let widths = assemble_widths(&set, cfg.widths_n_max, &cfg.width_methods)?;
    write_atomic(out, "widths.csv", |w| Ok(export::write_widths(w, &widths)?))?;
    Ok(if widths.is_consistent(1e-6) {
        Exit::Ok
    } else {
        Exit::BoundFailure
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerboundParams {
    pub alpha: f64,
    pub levels: u32,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerboundRow {
    pub n_level: u32,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub dim_e: usize,
    pub sigma_n: f64,
    pub d_min: f64,
    pub d_median: f64,
    pub ratio_median: f64,
    pub ratio_min: f64,
    pub sqrt_n: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LowerboundOutcome {
    pub params: LowerboundParams,
    /// Number of set elements (dyadic blocks `0..=2(levels−1)`).
    pub elements: usize,
    pub sigmas: Vec<f64>,
    /// `σ_n = x_n` exactly for every computed `n`.
    pub sigmas_exact: bool,
    pub rows: Vec<LowerboundRow>,
    #[serde(skip)]
    pub widths: Vec<RandomSubspaceWidth>,
    /// Median ratios strictly increase with `n`.
    pub ratio_increasing: bool,
}

/// Greedy errors versus random-subspace width bounds on the dyadic-blocks
/// set in `ℓ_∞`, at `N = 2^{n+1}` for `n = 1..levels−1`.
pub fn lowerbound_experiment(p: &LowerboundParams) -> Result<LowerboundOutcome, CliError> {
    if !(p.alpha > 0.5) {
        return Err(CliError::Config(format!("alpha must exceed 1/2, got {}", p.alpha)));
    }
    if p.levels < 2 {
        return Err(CliError::Config("levels must be at least 2".into()));
    }
    if p.trials < 1 {
        return Err(CliError::Config("trials must be at least 1".into()));
    }
    // blocks up to 2n must exist for the largest n = levels − 1
    let set_levels = 2 * (p.levels - 1);
    let spec = CompactSetSpec::DyadicBlocks {
        alpha: p.alpha,
        levels: set_levels,
    };
    let set = realize(&spec, NormKind::LInf)?;
    let x = spec.diagonal_values().expect("dyadic values");
    let n_top = 1usize << p.levels;
    let trace = run_weak_greedy(&set, &WeakGreedyParams::new(n_top.min(set.len())))?;
    let sigmas = trace.sigmas.clone();
    let sigmas_exact = sigmas
        .iter()
        .enumerate()
        .all(|(n, s)| *s == x.get(n).copied().unwrap_or(0.0));

    let widths = (1..p.levels)
        .map(|n| width_upper_random_subspace(&set, n, p.trials, p.seed))
        .collect::<wgreedy::Result<Vec<_>>>()?;
    let rows: Vec<LowerboundRow> = widths
        .iter()
        .map(|w| {
            let big_n = 1usize << (w.n_level + 1);
            let sigma_n = sigmas[big_n];
            LowerboundRow {
                n_level: w.n_level,
                big_n,
                dim_e: w.dim,
                sigma_n,
                d_min: w.min,
                d_median: w.median,
                ratio_median: sigma_n / w.median,
                ratio_min: sigma_n / w.min,
                sqrt_n: (big_n as f64).sqrt(),
            }
        })
        .collect();
    let ratio_increasing = rows.windows(2).all(|r| r[1].ratio_median > r[0].ratio_median);
    Ok(LowerboundOutcome {
        params: *p,
        elements: set.len(),
        sigmas,
        sigmas_exact,
        rows,
        widths,
        ratio_increasing,
    })
}

pub fn cmd_lowerbound(p: &LowerboundParams, out: &FsPath) -> Result<Exit, CliError> {
    let o = lowerbound_experiment(p)?;
    write_atomic(out, "sigmas.csv", |w| Ok(export::write_sigmas(w, &o.sigmas)?))?;
    write_atomic(out, "ratios.csv", |w| {
        let mut c = csv::Writer::from_writer(w);
        c.write_record([
            "n", "N", "dim_E", "sigma_N", "d_min", "d_median", "ratio_median", "ratio_min", "sqrt_N",
        ])?;
        for r in &o.rows {
            let f = export::fmt_f64;
            c.write_record([
                r.n_level.to_string(),
                r.big_n.to_string(),
                r.dim_e.to_string(),
                f(r.sigma_n),
                f(r.d_min),
                f(r.d_median),
                f(r.ratio_median),
                f(r.ratio_min),
                f(r.sqrt_n),
            ])?;
        }
        c.flush()?;
        Ok(())
    })?;
    write_atomic(out, "trials.csv", |w| {
        let mut c = csv::Writer::from_writer(w);
        c.write_record(["n", "trial", "d_upper"])?;
        for wd in &o.widths {
            for (t, v) in wd.trials.iter().enumerate() {
                c.write_record([wd.n_level.to_string(), t.to_string(), export::fmt_f64(*v)])?;
            }
        }
        c.flush()?;
        Ok(())
    })?;
    write_json(out, "summary.json", &o)?;
    if !o.ratio_increasing {
        log::warn!("median ratio sigma_N / d_N is not increasing for this seed");
    }
    Ok(if o.sigmas_exact { Exit::Ok } else { Exit::BoundFailure })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FuzzOutcome {
    pub k_max: usize,
    pub draws: usize,
    pub seed: u64,
    pub failures: usize,
    pub worst: Option<WorstLemma>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WorstLemma {
    pub draw: usize,
    pub report: BoundReport,
    pub instance: LemmaInstance,
}

pub fn lemma_fuzz(k_max: usize, draws: usize, seed: u64) -> Result<FuzzOutcome, CliError> {
    if k_max < 2 {
        return Err(CliError::Config("k_max must be at least 2".into()));
    }
    let mut r = rng::stream(seed, "lemma_fuzz");
    let instances: Vec<LemmaInstance> = (0..draws).map(|_| LemmaInstance::random(&mut r, k_max)).collect();
    let reports = instances
        .par_iter()
        .map(lemma1_check)
        .collect::<wgreedy::Result<Vec<_>>>()?;
    let failures = reports.iter().filter(|r| !r.passed()).count();
    let worst = reports
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.slack_log().total_cmp(&b.1.slack_log()))
        .map(|(i, rep)| WorstLemma {
            draw: i,
            report: rep.clone(),
            instance: instances[i].clone(),
        });
    Ok(FuzzOutcome {
        k_max,
        draws,
        seed,
        failures,
        worst,
    })
}

pub fn cmd_lemma_fuzz(k_max: usize, draws: usize, seed: u64, out: &FsPath) -> Result<Exit, CliError> {
    if draws == 0 {
        log::warn!("draws = 0: nothing to check");
    }
    let o = lemma_fuzz(k_max, draws, seed)?;
    write_json(out, "lemma_fuzz.json", &o)?;
    Ok(if o.failures == 0 { Exit::Ok } else { Exit::BoundFailure })
}

/// Prints a short digest of a previous `run` directory; exits with its recorded code.
pub fn cmd_report(out: &FsPath) -> Result<Exit, CliError> {
    let path = out.join("summary.json");
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let s: RunSummary = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    println!("set:        {}", serde_json::to_string(&s.set).unwrap_or_default());
    println!("norm:       {} ({:?} path), gamma = {}", s.norm, s.path, s.gamma);
    println!("selected:   {} of n_max = {} (terminated: {})", s.selected.len(), s.n_max, s.terminated);
    println!(
        "audit:      monotone {}, P1 {}, P2 {}, entries {}",
        s.audit.monotone, s.audit.p1_violations, s.audit.p2_violations, s.audit.entries_violations
    );
    let b = &s.bounds;
    println!(
        "bounds:     {} total, {} pass, {} fail, {} unmet, {} exploratory",
        b.total, b.pass, b.fail, b.unmet, b.exploratory
    );
    if let Some(w) = &b.worst {
        println!("worst:      {} N={:?} K={:?} m={:?} slack_log={}", w.name, w.n, w.k, w.m, w.slack_log);
    }
    Ok(match s.exit_code {
        0 => Exit::Ok,
        1 => Exit::BoundFailure,
        2 => Exit::Config,
        _ => Exit::Numerical,
    })
}
