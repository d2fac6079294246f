//! Weak greedy selection of approximation spaces.
//!
//! At step `n` every element's distance `σ_n(f) = dist(f, V_n)` is computed,
//! the set-wide maximum `σ_n` is recorded, and a policy picks `f_n` among the
//! elements with `σ_n(f) ≥ γ σ_n`. The run is summarized by the
//! lower-triangular matrix `A`:
//!
//! * Hilbert path: `a_{i,j} = ⟨f_i, f_j^*⟩` against the Gram–Schmidt system;
//! * Banach path: `a_{i,j} = λ_j(f_i)` for norm-one functionals with
//!   `λ_j(V_j) = 0` and `λ_j(f_j) = dist(f_j, V_j)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{dist_hilbert, distance_generic, ApproxResult, SolverOptions, Subspace};
use crate::error::{Error, Result};
use crate::seqspace::{dot, norm, norming_functional, DenseVector, Functional, NormKind};
use crate::sets::CompactSet;

/// Annihilation tolerance `|λ_j(v)| ≤ τ ‖v‖` for `v` spanning `V_j`.
pub const TAU_ANNIH: f64 = 1e-8;

pub const DEFAULT_TERMINATION_EPS: f64 = 1e-13;

/// Tolerance for Hilbert-path audits (closed-form projections).
pub const HILBERT_AUDIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Largest distance; ties go to the smallest index.
    Argmax,
    /// First qualifying element in scan order.
    FirstAboveThreshold,
    /// Qualifying element with the smallest distance (adversarial).
    MinimalAboveThreshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Path {
    Hilbert,
    Banach,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakGreedyParams {
    pub gamma: f64,
    pub n_max: usize,
    pub policy: Policy,
    /// Stop once `σ_n ≤ termination_eps`; `0` disables early termination.
    pub termination_eps: f64,
    pub solver: SolverOptionsSer,
}

/// Serializable mirror of [`SolverOptions`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptionsSer {
    pub tol: f64,
    pub max_iter: usize,
}

impl From<SolverOptionsSer> for SolverOptions {
    fn from(s: SolverOptionsSer) -> Self {
        SolverOptions {
            tol: s.tol,
            max_iter: s.max_iter,
        }
    }
}

impl Default for SolverOptionsSer {
    fn default() -> Self {
        let d = SolverOptions::default();
        Self {
            tol: d.tol,
            max_iter: d.max_iter,
        }
    }
}

impl WeakGreedyParams {
    pub fn new(n_max: usize) -> Self {
        Self {
            gamma: 1.0,
            n_max,
            policy: Policy::Argmax,
            termination_eps: DEFAULT_TERMINATION_EPS,
            solver: SolverOptionsSer::default(),
        }
    }

    pub fn gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn policy(mut self, policy: Policy) -> Self {
        self.policy = policy;
        self
    }

    pub fn termination_eps(mut self, eps: f64) -> Self {
        self.termination_eps = eps;
        self
    }

    fn validate(&self, set_len: usize) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "gamma must lie in (0, 1], got {}",
                self.gamma
            )));
        }
        if self.n_max > set_len {
            return Err(Error::InvalidArgument(format!(
                "n_max = {} exceeds the set size {set_len}",
                self.n_max
            )));
        }
        if !(self.termination_eps >= 0.0) {
            return Err(Error::InvalidArgument("termination_eps must be >= 0".into()));
        }
        Ok(())
    }
}

/// Full record of a weak greedy run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GreedyTrace {
    pub path: Path,
    pub norm_kind: NormKind,
    pub params: WeakGreedyParams,
    /// Indices into the set, in selection order.
    pub selected: Vec<usize>,
    /// `σ_0, σ_1, …`: set-wide maxima, one per completed sweep. Has one
    /// more entry than `selected` unless a sweep was skipped at `n_max = 0`.
    pub sigmas: Vec<f64>,
    /// `σ_n(f_n)`, the distance of the element actually chosen at step `n`.
    pub selected_distances: Vec<f64>,
    pub selected_elements: Vec<DenseVector>,
    /// Gram–Schmidt vectors `f_j^*` (Hilbert path; `None` for dependent picks).
    pub ortho: Vec<Option<DenseVector>>,
    /// Functionals `λ_j` (Banach path; `None` when `dist(f_j, V_j) = 0`).
    pub functionals: Vec<Option<Functional>>,
    /// Lower-triangular `A`, `selected.len()` square.
    pub a: Vec<Vec<f64>>,
    /// `per_step_distances[n][i] = dist(f_i, V_n)`.
    pub per_step_distances: Vec<Vec<f64>>,
    /// The run stopped because `σ_n ≤ termination_eps` or the set was exhausted.
    pub terminated: bool,
    /// Some `λ_j` misses `λ_j(V_j) = 0` by more than [`TAU_ANNIH`].
    pub functional_approximate: bool,
    pub max_annihilation_defect: f64,
    /// Tolerance to use when auditing this trace.
    pub audit_tol: f64,
}

impl GreedyTrace {
    /// `σ_n`, padded with zeros past termination (`f_m := 0`).
    pub fn sigma(&self, n: usize) -> Option<f64> {
        match self.sigmas.get(n) {
            Some(s) => Some(*s),
            None if self.terminated => Some(0.0),
            None => None,
        }
    }

    /// `σ_0..σ_len` with zero padding when terminated; truncated otherwise.
    pub fn sigmas_padded(&self, len: usize) -> Vec<f64> {
        (0..len).map_while(|n| self.sigma(n)).collect()
    }

    pub fn audit(&self) -> Audit {
        let tol = self.audit_tol;
        Audit {
            monotone: sigmas_monotone(&self.sigmas, self.audit_tol),
            p1: p1_violations(&self.a, &self.sigmas, self.params.gamma, tol),
            p2: if self.path == Path::Hilbert {
                p2_violations(&self.a, &self.sigmas, tol)
            } else {
                Vec::new()
            },
            entries: if self.path == Path::Banach {
                entries_violations(&self.a, &self.sigmas, tol)
            } else {
                Vec::new()
            },
            functional_approximate: self.functional_approximate,
        }
    }
}

/// Outcome of the structural checks on a trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Audit {
    pub monotone: bool,
    /// `(n, |a_nn|)` where `γσ_n ≤ |a_nn| ≤ σ_n` fails.
    pub p1: Vec<(usize, f64)>,
    /// `(n, m)` where `Σ_{j=n}^m a_{m,j}² ≤ σ_n²` fails (Hilbert path).
    pub p2: Vec<(usize, usize)>,
    /// `(i, j)` where `|a_{i,j}| ≤ σ_j` fails for `j < i` (Banach path).
    pub entries: Vec<(usize, usize)>,
    pub functional_approximate: bool,
}

impl Audit {
    pub fn passed(&self) -> bool {
        self.monotone && self.p1.is_empty() && self.p2.is_empty() && self.entries.is_empty()
    }
}

/// Non-increasing up to `tol` relative to `sigma_0`.
pub fn sigmas_monotone(sigmas: &[f64], tol: f64) -> bool {
    let slack = tol * sigmas.first().copied().unwrap_or(0.0).max(1.0);
    sigmas.windows(2).all(|w| w[1] <= w[0] + slack)
}

pub fn p1_violations(a: &[Vec<f64>], sigmas: &[f64], gamma: f64, tol: f64) -> Vec<(usize, f64)> {
    (0..a.len().min(sigmas.len()))
        .filter_map(|n| {
            let d = a[n][n].abs();
            let ok = gamma * sigmas[n] <= d + tol && d <= sigmas[n] + tol;
            (!ok).then_some((n, d))
        })
        .collect()
}

pub fn p2_violations(a: &[Vec<f64>], sigmas: &[f64], tol: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for m in 0..a.len() {
        let mut tail = 0.0;
        // accumulate Σ_{j=n}^m a_{m,j}² from n = m down to 0
        for n in (0..=m).rev() {
            tail += a[m][n] * a[m][n];
            if n < sigmas.len() && tail > sigmas[n] * sigmas[n] + tol {
                out.push((n, m));
            }
        }
    }
    out
}

pub fn entries_violations(a: &[Vec<f64>], sigmas: &[f64], tol: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate().take(i) {
            if j < sigmas.len() && v.abs() > sigmas[j] + tol {
                out.push((i, j));
            }
        }
    }
    out
}

/// Runs the weak greedy algorithm on the path matching the set's norm.
pub fn run_weak_greedy(set: &CompactSet, params: &WeakGreedyParams) -> Result<GreedyTrace> {
    let path = if set.norm_kind == NormKind::Hilbert {
        Path::Hilbert
    } else {
        Path::Banach
    };
    run_weak_greedy_on(set, params, path)
}

/// Runs the weak greedy algorithm on an explicit path. The Banach path
/// accepts every norm, including `ℓ_2`.
pub fn run_weak_greedy_on(
    set: &CompactSet,
    params: &WeakGreedyParams,
    path: Path,
) -> Result<GreedyTrace> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    params.validate(set.len())?;
    if path == Path::Hilbert && set.norm_kind != NormKind::Hilbert {
        return Err(Error::WrongMode { expected: "Hilbert-norm" });
    }
    let kind = set.norm_kind;
    let opts: SolverOptions = params.solver.into();
    let m = set.len();
    let mut space = Subspace::empty(set.ambient_dim());
    let mut chosen = vec![false; m];

    let mut trace = GreedyTrace {
        path,
        norm_kind: kind,
        params: *params,
        selected: Vec::new(),
        sigmas: Vec::new(),
        selected_distances: Vec::new(),
        selected_elements: Vec::new(),
        ortho: Vec::new(),
        functionals: Vec::new(),
        a: Vec::new(),
        per_step_distances: Vec::new(),
        terminated: false,
        functional_approximate: false,
        max_annihilation_defect: 0.0,
        audit_tol: match path {
            Path::Hilbert => HILBERT_AUDIT_TOL,
            Path::Banach => 10.0 * opts.tol,
        },
    };

    for n in 0..=params.n_max {
        let results: Vec<Option<ApproxResult>> = set
            .elements
            .par_iter()
            .enumerate()
            .map(|(i, f)| {
                if chosen[i] {
                    return Ok(None);
                }
                let r = match path {
                    Path::Hilbert => dist_hilbert(f, &space),
                    Path::Banach => distance_generic(f, &space, kind, &opts),
                };
                r.map(Some).map_err(|e| e.at_step(n))
            })
            .collect::<Result<_>>()?;
        let dists: Vec<f64> = results
            .iter()
            .map(|r| r.as_ref().map_or(0.0, |r| r.distance))
            .collect();
        let sigma = dists.iter().copied().fold(0.0, f64::max);
        trace.sigmas.push(sigma);
        trace.per_step_distances.push(dists.clone());

        if (params.termination_eps > 0.0 && sigma <= params.termination_eps) || n == m {
            trace.terminated = true;
            break;
        }
        if n == params.n_max {
            break;
        }

        let pick = select(&dists, &chosen, sigma, params).expect("a candidate remains");
        let result = results[pick].as_ref().expect("unselected element was measured");
        let f = &set.elements[pick];

        match path {
            Path::Hilbert => {
                let step = space.push(f.clone())?;
                trace.ortho.push(step.new_vector);
            }
            Path::Banach => {
                let (lambda, defect) = banach_functional(result, &space, kind)?;
                trace.max_annihilation_defect = trace.max_annihilation_defect.max(defect);
                if defect > TAU_ANNIH {
                    trace.functional_approximate = true;
                }
                trace.functionals.push(lambda);
                space.push(f.clone())?;
            }
        }
        chosen[pick] = true;
        trace.selected.push(pick);
        trace.selected_distances.push(dists[pick]);
        trace.selected_elements.push(f.clone());
    }

    trace.a = match path {
        Path::Hilbert => extract_a_hilbert(&trace)?,
        Path::Banach => extract_a_banach(&trace)?,
    };
    Ok(trace)
}

fn select(dists: &[f64], chosen: &[bool], sigma: f64, params: &WeakGreedyParams) -> Option<usize> {
    let candidates = (0..dists.len()).filter(|&i| !chosen[i]);
    match params.policy {
        Policy::Argmax => candidates.fold(None, |best: Option<usize>, i| match best {
            Some(b) if dists[b] >= dists[i] => Some(b),
            _ => Some(i),
        }),
        Policy::FirstAboveThreshold => {
            let threshold = params.gamma * sigma;
            candidates.into_iter().find(|&i| dists[i] >= threshold)
        }
        Policy::MinimalAboveThreshold => {
            let threshold = params.gamma * sigma;
            candidates
                .filter(|&i| dists[i] >= threshold)
                .fold(None, |best: Option<usize>, i| match best {
                    Some(b) if dists[b] <= dists[i] => Some(b),
                    _ => Some(i),
                })
        }
    }
}

/// Worst `|λ(v)| / ‖v‖` over the spanning vectors of `space`.
fn annihilation_defect(lambda: &Functional, space: &Subspace, kind: NormKind) -> f64 {
    space
        .independent_indices()
        .iter()
        .map(|&i| {
            let v = &space.basis()[i];
            let nv = norm(v, kind);
            if nv == 0.0 {
                0.0
            } else {
                dot(lambda.coeffs.as_slice(), v.as_slice()).abs() / nv
            }
        })
        .fold(0.0, f64::max)
}

/// `λ_j`: the norming functional of the best-approximation residual; for
/// `ℓ_1`/`ℓ_∞`, the solver's dual certificate when the former fails to
/// vanish on `V_j`.
fn banach_functional(
    result: &ApproxResult,
    space: &Subspace,
    kind: NormKind,
) -> Result<(Option<Functional>, f64)> {
    if result.distance == 0.0 || result.residual.is_zero() {
        return Ok((None, 0.0));
    }
    let primary = norming_functional(&result.residual, kind)?;
    let defect = annihilation_defect(&primary, space, kind);
    if defect <= TAU_ANNIH || kind.is_smooth() {
        return Ok((Some(primary), defect));
    }
    match &result.functional {
        Some(cert) => {
            let d = annihilation_defect(cert, space, kind);
            if d < defect {
                Ok((Some(cert.clone()), d))
            } else {
                Ok((Some(primary), defect))
            }
        }
        None => Ok((Some(primary), defect)),
    }
}

fn square(n: usize) -> Vec<Vec<f64>> {
    vec![vec![0.0; n]; n]
}

/// `a_{i,j} = ⟨f_i, f_j^*⟩` for `j ≤ i`; dependent picks contribute a zero column.
pub fn extract_a_hilbert(trace: &GreedyTrace) -> Result<Vec<Vec<f64>>> {
    if trace.path != Path::Hilbert {
        return Err(Error::WrongMode { expected: "Hilbert" });
    }
    let l = trace.selected.len();
    let mut a = square(l);
    for (i, f) in trace.selected_elements.iter().enumerate() {
        for (j, q) in trace.ortho.iter().enumerate().take(i + 1) {
            if let Some(q) = q {
                a[i][j] = dot(f.as_slice(), q.as_slice());
            }
        }
    }
    Ok(a)
}

/// `a_{i,j} = λ_j(f_i)`, including the (ideally zero) entries above the diagonal.
pub fn extract_a_banach(trace: &GreedyTrace) -> Result<Vec<Vec<f64>>> {
    if trace.path != Path::Banach {
        return Err(Error::WrongMode { expected: "Banach" });
    }
    let l = trace.selected.len();
    let mut a = square(l);
    for (i, f) in trace.selected_elements.iter().enumerate() {
        for (j, lambda) in trace.functionals.iter().enumerate() {
            if let Some(lambda) = lambda {
                a[i][j] = dot(lambda.coeffs.as_slice(), f.as_slice());
            }
        }
    }
    Ok(a)
}

/// Largest `|a_{i,j}|` with `j > i`.
pub fn upper_triangle_defect(a: &[Vec<f64>]) -> f64 {
    a.iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().skip(i + 1).map(|v| v.abs()))
        .fold(0.0, f64::max)
}
