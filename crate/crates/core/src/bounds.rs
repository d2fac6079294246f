//! Executable greedy-versus-width inequalities.
//!
//! Every check is evaluated in log-space: products of up to `K` squared
//! errors underflow quickly, and `σ = 0` simply becomes `−∞` (automatic pass).

use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greedy::Path;
use crate::widths::WidthSequence;

/// Relative tolerance: pass iff `LHS ≤ RHS·(1 + tol)`.
pub const TOL_REPORT: f64 = 1e-10;

/// Orthonormality tolerance for lemma subspaces.
pub const TOL_ORTHONORMAL: f64 = 1e-12;

const LN_SQRT2: f64 = std::f64::consts::LN_2 / 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The rate hypothesis was not certified on the supplied widths.
    HypothesisUnmet,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "true",
            Verdict::Fail => "false",
            Verdict::HypothesisUnmet => "unmet",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    #[serde(rename = "K")]
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub gamma: f64,
    pub lhs_log: f64,
    pub rhs_log: f64,
    pub verdict: Verdict,
    pub tol_report: f64,
    /// Not part of any stated result; never counted as a failure.
    pub exploratory: bool,
    pub notes: String,
}

impl BoundReport {
    fn new(name: &str, gamma: f64, lhs_log: f64, rhs_log: f64) -> Self {
        let pass = lhs_log == f64::NEG_INFINITY || lhs_log <= rhs_log + TOL_REPORT.ln_1p();
        Self {
            name: name.to_string(),
            n: None,
            k: None,
            m: None,
            gamma,
            lhs_log,
            rhs_log,
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            tol_report: TOL_REPORT,
            exploratory: false,
            notes: String::new(),
        }
    }

    fn at(mut self, n: Option<usize>, k: Option<usize>, m: Option<usize>) -> Self {
        self.n = n;
        self.k = k;
        self.m = m;
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        if !note.is_empty() {
            if !self.notes.is_empty() {
                self.notes.push_str("; ");
            }
            self.notes.push_str(&note);
        }
        self
    }

    /// `rhs_log − lhs_log`; `+∞` when the left side vanishes.
    pub fn slack_log(&self) -> f64 {
        if self.lhs_log == f64::NEG_INFINITY {
            f64::INFINITY
        } else {
            self.rhs_log - self.lhs_log
        }
    }

    pub fn lhs(&self) -> f64 {
        self.lhs_log.exp()
    }

    pub fn rhs(&self) -> f64 {
        self.rhs_log.exp()
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// A stated inequality that evaluated false.
    pub fn is_violation(&self) -> bool {
        self.verdict == Verdict::Fail && !self.exploratory
    }
}

fn ln(x: f64) -> f64 {
    if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        x.ln()
    }
}

/// `c · ln x` with `0 · ln 0 = 0`.
fn scaled_ln(c: f64, x: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c * ln(x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaInstance {
    /// `K × K` lower-triangular matrix, stored by rows.
    pub g: Vec<Vec<f64>>,
    /// Orthonormal basis of `W`, `m` vectors in `R^K`.
    pub w_basis: Vec<Vec<f64>>,
}

impl LemmaInstance {
    pub fn k(&self) -> usize {
        self.g.len()
    }

    pub fn m(&self) -> usize {
        self.w_basis.len()
    }

    /// `G = I_K`, `W` spanned by the first `m` coordinates.
    pub fn identity(k: usize, m: usize) -> Self {
        let unit = |j: usize| (0..k).map(|i| if i == j { 1.0 } else { 0.0 }).collect();
        Self {
            g: (0..k).map(unit).collect(),
            w_basis: (0..m).map(unit).collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        let (k, m) = (self.k(), self.m());
        if !(1 <= m && m < k) {
            return Err(Error::InvalidArgument(format!("need 1 <= m < K, got m = {m}, K = {k}")));
        }
        for (i, row) in self.g.iter().enumerate() {
            if row.len() != k {
                return Err(Error::DimensionMismatch { left: row.len(), right: k });
            }
            if row.iter().skip(i + 1).any(|v| *v != 0.0) {
                return Err(Error::InvalidArgument(format!("G is not lower triangular in row {i}")));
            }
        }
        for (a, u) in self.w_basis.iter().enumerate() {
            if u.len() != k {
                return Err(Error::DimensionMismatch { left: u.len(), right: k });
            }
            for (b, v) in self.w_basis.iter().enumerate() {
                let d: f64 = u.iter().zip(v).map(|(x, y)| x * y).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                if (d - target).abs() > TOL_ORTHONORMAL {
                    return Err(Error::InvalidArgument(format!(
                        "W basis is not orthonormal: <w_{a}, w_{b}> = {d}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// A random instance with `2 ≤ K ≤ k_max`: Gaussian `G`, and `W`
    /// spanned by Gaussian vectors, orthonormalized.
    pub fn random<R: Rng>(rng: &mut R, k_max: usize) -> Self {
        let k = rng.random_range(2..=k_max.max(2));
        let m = rng.random_range(1..k);
        let g = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if j <= i { rng.sample(StandardNormal) } else { 0.0 })
                    .collect()
            })
            .collect();
        let mut w_basis: Vec<Vec<f64>> = Vec::with_capacity(m);
        while w_basis.len() < m {
            let mut v: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
            for _ in 0..2 {
                for u in &w_basis {
                    let c: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
                    v.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
                }
            }
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-8 {
                w_basis.push(v.into_iter().map(|x| x / n).collect());
            }
        }
        Self { g, w_basis }
    }
}

/// `Π g_ii² ≤ (Σ‖Pg_i‖²/m)^m (Σ‖g_i − Pg_i‖²/(K−m))^{K−m}`.
pub fn lemma1_check(inst: &LemmaInstance) -> Result<BoundReport> {
    inst.validate()?;
    let (k, m) = (inst.k(), inst.m());
    let lhs_log: f64 = (0..k).map(|i| 2.0 * ln(inst.g[i][i].abs())).sum();
    let mut in_w = 0.0;
    let mut off_w = 0.0;
    for row in &inst.g {
        let mut r = row.clone();
        for w in &inst.w_basis {
            let c: f64 = w.iter().zip(row).map(|(a, b)| a * b).sum();
            in_w += c * c;
            r.iter_mut().zip(w).for_each(|(x, y)| *x -= c * y);
        }
        off_w += r.iter().map(|x| x * x).sum::<f64>();
    }
    let rhs_log = scaled_ln(m as f64, in_w / m as f64) + scaled_ln((k - m) as f64, off_w / (k - m) as f64);
    Ok(BoundReport::new("lemma", 1.0, lhs_log, rhs_log).at(None, Some(k), Some(m)))
}

fn sigma_at(sigmas: &[f64], i: usize) -> Result<f64> {
    sigmas
        .get(i)
        .copied()
        .ok_or_else(|| Error::IndexRange(format!("sigma_{i} not available ({} values)", sigmas.len())))
}

fn width_at(d: &WidthSequence, m: usize) -> Result<f64> {
    d.upper(m)
        .ok_or_else(|| Error::IndexRange(format!("no upper bound for d_{m}")))
}

fn check_nkm(k: usize, m: usize, gamma: f64) -> Result<()> {
    if !(1 <= m && m < k) {
        return Err(Error::IndexRange(format!("need 1 <= m < K, got m = {m}, K = {k}")));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidArgument(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    Ok(())
}

const MONOTONE_NOTE: &str = "d_m is an upper bound; rhs increasing in d_m";

/// Hilbert-space inequality:
/// `Π_{i=1}^K σ²_{N+i} ≤ γ^{−2K} (K/m)^m (K/(K−m))^{K−m} σ_{N+1}^{2m} d_m^{2K−2m}`.
pub fn theorem_hilbert_check(
    sigmas: &[f64],
    d: &WidthSequence,
    n: usize,
    k: usize,
    m: usize,
    gamma: f64,
) -> Result<BoundReport> {
    check_nkm(k, m, gamma)?;
    let lhs_log = (1..=k)
        .map(|i| sigma_at(sigmas, n + i).map(|s| 2.0 * ln(s)))
        .sum::<Result<f64>>()?;
    let (kf, mf) = (k as f64, m as f64);
    let dm = width_at(d, m)?;
    let rhs_log = -2.0 * kf * gamma.ln()
        + mf * (kf / mf).ln()
        + (kf - mf) * (kf / (kf - mf)).ln()
        + scaled_ln(2.0 * mf, sigma_at(sigmas, n + 1)?)
        + scaled_ln(2.0 * (kf - mf), dm);
    Ok(BoundReport::new("theorem_hilbert", gamma, lhs_log, rhs_log)
        .at(Some(n), Some(k), Some(m))
        .note(MONOTONE_NOTE))
}

/// Banach-space inequality:
/// `Π σ²_{N+i} ≤ 2^K K^{K−m} γ^{−2K} (Σ σ²_{N+i})^m d_m^{2K−2m}`.
pub fn theorem_banach_check(
    sigmas: &[f64],
    d: &WidthSequence,
    n: usize,
    k: usize,
    m: usize,
    gamma: f64,
) -> Result<BoundReport> {
    check_nkm(k, m, gamma)?;
    let window = (1..=k)
        .map(|i| sigma_at(sigmas, n + i))
        .collect::<Result<Vec<f64>>>()?;
    let lhs_log: f64 = window.iter().map(|s| 2.0 * ln(*s)).sum();
    let energy: f64 = window.iter().map(|s| s * s).sum();
    let (kf, mf) = (k as f64, m as f64);
    let dm = width_at(d, m)?;
    let rhs_log = kf * std::f64::consts::LN_2 + (kf - mf) * kf.ln() - 2.0 * kf * gamma.ln()
        + scaled_ln(mf, energy)
        + scaled_ln(2.0 * (kf - mf), dm);
    Ok(BoundReport::new("theorem_banach", gamma, lhs_log, rhs_log)
        .at(Some(n), Some(k), Some(m))
        .note(MONOTONE_NOTE))
}

/// All admissible `(N, K, m)` with `2 ≤ K ≤ k_max` and `σ_{N+K}` available,
/// in lexicographic order.
pub fn theorem_sweep(
    sigmas: &[f64],
    d: &WidthSequence,
    gamma: f64,
    k_max: usize,
    path: Path,
) -> Result<Vec<BoundReport>> {
    let mut triples = Vec::new();
    for n in 0..sigmas.len() {
        for k in 2..=k_max {
            if n + k >= sigmas.len() {
                break;
            }
            for m in 1..k {
                if d.upper(m).is_some() {
                    triples.push((n, k, m));
                }
            }
        }
    }
    triples
        .par_iter()
        .map(|&(n, k, m)| match path {
            Path::Hilbert => theorem_hilbert_check(sigmas, d, n, k, m, gamma),
            Path::Banach => theorem_banach_check(sigmas, d, n, k, m, gamma),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Corollary {
    #[serde(rename = "C1_i")]
    C1I,
    #[serde(rename = "C1_ii")]
    C1Ii,
    #[serde(rename = "C1_iii")]
    C1Iii,
    #[serde(rename = "C2_i")]
    C2I,
    #[serde(rename = "C2_ii")]
    C2Ii,
    #[serde(rename = "C2_iii")]
    C2Iii,
}

impl Corollary {
    pub const ALL: [Corollary; 6] = [
        Corollary::C1I,
        Corollary::C1Ii,
        Corollary::C1Iii,
        Corollary::C2I,
        Corollary::C2Ii,
        Corollary::C2Iii,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Corollary::C1I => "C1_i",
            Corollary::C1Ii => "C1_ii",
            Corollary::C1Iii => "C1_iii",
            Corollary::C2I => "C2_i",
            Corollary::C2Ii => "C2_ii",
            Corollary::C2Iii => "C2_iii",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.label() == s)
    }
}

/// Rate hypotheses `d_n ≤ C_0 n^{−α}` or `d_n ≤ C_0 e^{−c_0 n^α}`; derived
/// constants are computed, never supplied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateParams {
    pub alpha: f64,
    pub beta: Option<f64>,
    pub big_c0: f64,
    pub small_c0: f64,
    pub gamma: f64,
    /// Multiplier on the polynomial-rate constants (1 reproduces the stated ones).
    pub constant_scale: f64,
    /// Exploratory exponent for the exponential Banach rate without `√n`.
    pub c1_prime: Option<f64>,
}

impl RateParams {
    pub fn new(alpha: f64, big_c0: f64, small_c0: f64, gamma: f64) -> Self {
        Self {
            alpha,
            beta: None,
            big_c0,
            small_c0,
            gamma,
            constant_scale: 1.0,
            c1_prime: None,
        }
    }

    /// `C_1 = 2^{5α+1} γ^{−2} C_0`.
    pub fn c1_hilbert_poly(&self) -> f64 {
        self.constant_scale * 2f64.powf(5.0 * self.alpha + 1.0) * self.big_c0 / (self.gamma * self.gamma)
    }

    /// `c_1 = 2^{−1−2α} c_0`.
    pub fn c1_exp(&self) -> f64 {
        2f64.powf(-1.0 - 2.0 * self.alpha) * self.small_c0
    }

    /// `C_1 = max{C_0 4^{4α+1} γ^{−4} ((2β+1)/(2β))^α, max_{n≤7} n^{α−β−1/2}}`.
    pub fn c1_banach_poly(&self) -> Result<f64> {
        let (a, g) = (self.alpha, self.gamma);
        let b = self
            .beta
            .ok_or_else(|| Error::InvalidArgument("beta is required for the Banach polynomial rate".into()))?;
        if !(b > 0.0 && b < a.min(0.5)) {
            return Err(Error::InvalidArgument(format!(
                "beta must satisfy 0 < beta < min(alpha, 1/2), got {b}"
            )));
        }
        let first = self.big_c0 * 4f64.powf(4.0 * a + 1.0) / g.powi(4) * ((2.0 * b + 1.0) / (2.0 * b)).powf(a);
        let second = (1..=7)
            .map(|n| (n as f64).powf(a - b - 0.5))
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(self.constant_scale * first.max(second))
    }
}

/// `ln(√2 γ^{−1} d_m^{(n−m)/n})`, the `m`-th term of the Hilbert min-form.
pub fn c11_term_log(d_m: f64, n: usize, m: usize, gamma: f64) -> f64 {
    let e = (n - m) as f64 / n as f64;
    LN_SQRT2 - gamma.ln() + scaled_ln(e, d_m)
}

fn c21_term_log(d_m: f64, energy: f64, n: usize, m: usize, gamma: f64) -> f64 {
    let nf = n as f64;
    let e = (n - m) as f64 / nf;
    LN_SQRT2 - gamma.ln() + e / 2.0 * nf.ln() + scaled_ln(m as f64 / (2.0 * nf), energy) + scaled_ln(e, d_m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Envelope {
    Poly,
    Exp,
}

fn envelope(rate: &RateParams, kind: Envelope, n: usize) -> f64 {
    let nf = n as f64;
    match kind {
        Envelope::Poly => rate.big_c0 * nf.powf(-rate.alpha),
        Envelope::Exp => rate.big_c0 * (-rate.small_c0 * nf.powf(rate.alpha)).exp(),
    }
}

/// `Some(note)` describing the first `n` where the width bound misses the envelope.
fn certify(d: &WidthSequence, rate: &RateParams, kind: Envelope, n_max: usize) -> Option<String> {
    for n in 1..=n_max {
        let env = envelope(rate, kind, n);
        match d.upper(n) {
            Some(u) if u <= env * (1.0 + 1e-12) => {}
            Some(u) => return Some(format!("hypothesis fails at n={n}: d_n <= {u:e} > {env:e}")),
            None => return Some(format!("no width bound at n={n}")),
        }
    }
    None
}

/// Evaluates the selected corollaries at every index the inputs allow.
///
/// `sigmas` is the (zero-padded) greedy sequence `σ_0, σ_1, …`; `d` gives
/// width upper bounds. Rate hypotheses are certified on `1..=d.max_n()` only.
pub fn corollary_checks(
    sigmas: &[f64],
    d: &WidthSequence,
    rate: &RateParams,
    which: &[Corollary],
) -> Result<Vec<BoundReport>> {
    let gamma = rate.gamma;
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidArgument(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    let top = sigmas.len().saturating_sub(1);
    let d_max = d.max_n().unwrap_or(0);
    let mut out = Vec::new();

    for &c in which {
        let name = c.label();
        match c {
            Corollary::C1I | Corollary::C2I => {
                let banach = c == Corollary::C2I;
                for n in 1..=top / 2 {
                    let Some(dn) = d.upper(n) else { break };
                    let lhs = ln(sigmas[2 * n]);
                    let rhs = if banach {
                        std::f64::consts::LN_2 - gamma.ln() + 0.5 * (ln(n as f64) + ln(dn))
                    } else {
                        c11_term_log(dn, 2 * n, n, gamma)
                    };
                    out.push(BoundReport::new(name, gamma, lhs, rhs).at(Some(2 * n), None, Some(n)));
                }
                let min_name = if banach { "C2_i_min" } else { "C1_i_min" };
                for n in 2..=top {
                    let energy: f64 = sigmas[1..=n].iter().map(|s| s * s).sum();
                    let best = (1..n)
                        .filter_map(|m| {
                            let dm = d.upper(m)?;
                            Some((
                                m,
                                if banach {
                                    c21_term_log(dm, energy, n, m, gamma)
                                } else {
                                    c11_term_log(dm, n, m, gamma)
                                },
                            ))
                        })
                        .min_by(|a, b| a.1.total_cmp(&b.1));
                    if let Some((m, rhs)) = best {
                        out.push(
                            BoundReport::new(min_name, gamma, ln(sigmas[n]), rhs).at(Some(n), None, Some(m)),
                        );
                    }
                }
            }
            Corollary::C1Ii | Corollary::C2Ii => {
                let (c1, shift) = if c == Corollary::C1Ii {
                    (rate.c1_hilbert_poly(), 0.0)
                } else {
                    (rate.c1_banach_poly()?, 0.5 + rate.beta.unwrap_or(0.0))
                };
                let unmet = certify(d, rate, Envelope::Poly, d_max);
                for n in 1..=top {
                    let rhs = c1.ln() + (shift - rate.alpha) * (n as f64).ln();
                    out.push(finish(
                        BoundReport::new(name, gamma, ln(sigmas[n]), rhs).at(Some(n), None, None),
                        &unmet,
                        d_max,
                        format!("C1={c1:e}"),
                    ));
                }
            }
            Corollary::C1Iii | Corollary::C2Iii => {
                let banach = c == Corollary::C2Iii;
                let c1 = rate.c1_exp();
                let unmet = certify(d, rate, Envelope::Exp, d_max);
                let base = 0.5 * (2.0 * rate.big_c0).ln() - gamma.ln();
                for n in 1..=top {
                    let nf = n as f64;
                    let sqrt_n = if banach { 0.5 * nf.ln() } else { 0.0 };
                    let rhs = base + sqrt_n - c1 * nf.powf(rate.alpha);
                    out.push(finish(
                        BoundReport::new(name, gamma, ln(sigmas[n]), rhs).at(Some(n), None, None),
                        &unmet,
                        d_max,
                        format!("c1={c1:e}"),
                    ));
                }
                if !banach {
                    // minimum of the Hilbert min-form over the hypothesized envelope
                    for n in 2..=top {
                        let rhs = (1..n)
                            .map(|m| c11_term_log(envelope(rate, Envelope::Exp, m), n, m, gamma))
                            .fold(f64::INFINITY, f64::min);
                        let a = rate.alpha;
                        let c_star = rate.small_c0 * a.powf(a) / (a + 1.0).powf(a + 1.0);
                        out.push(finish(
                            BoundReport::new("C1_iii_tight", gamma, ln(sigmas[n]), rhs).at(Some(n), None, None),
                            &unmet,
                            d_max,
                            format!("asymptotic exponent c0*max x^a(1-x)={c_star:e}"),
                        ));
                    }
                } else if let Some(c1p) = rate.c1_prime {
                    for n in 1..=top {
                        let rhs = base - c1p * (n as f64).powf(rate.alpha);
                        let mut r = finish(
                            BoundReport::new("C2_iii_nosqrt", gamma, ln(sigmas[n]), rhs).at(Some(n), None, None),
                            &unmet,
                            d_max,
                            format!("user c1'={c1p:e}"),
                        );
                        r.exploratory = true;
                        out.push(r);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn finish(r: BoundReport, unmet: &Option<String>, range: usize, extra: String) -> BoundReport {
    let r = r.note(extra).note(format!("hypothesis certified on n<={range} only"));
    match unmet {
        Some(why) => {
            let mut r = r.note(why.clone());
            r.verdict = Verdict::HypothesisUnmet;
            r
        }
        None => r,
    }
}

/// Earlier comparison curves, for plotting only. The absolute constants in
/// those results are unspecified; `C = 1`, `C' = C_0`, `c' = c_0` are used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRates {
    pub n: usize,
    /// `C n 2^n d_n`.
    pub exponential_loss: f64,
    /// `C' n^{−α}`.
    pub polynomial: f64,
    /// `C' e^{−c' n^β}`, `β = α/(α+1)`.
    pub subexponential: f64,
    pub beta: f64,
}

pub fn reference_rates(rate: &RateParams, n: usize, d_n: f64) -> ReferenceRates {
    let nf = n as f64;
    let beta = rate.alpha / (rate.alpha + 1.0);
    ReferenceRates {
        n,
        exponential_loss: nf * 2f64.powf(nf) * d_n,
        polynomial: rate.big_c0 * nf.powf(-rate.alpha),
        subexponential: rate.big_c0 * (-rate.small_c0 * nf.powf(beta)).exp(),
        beta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::widths::WidthTag;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;

    fn widths_from(values: &[f64]) -> WidthSequence {
        let mut w = WidthSequence::default();
        for (n, v) in values.iter().enumerate() {
            w.push(n, *v, WidthTag::Upper, "test");
        }
        w
    }

    #[test]
    fn lemma_identity_is_equality() {
        for (k, m) in [(2, 1), (5, 2), (8, 7)] {
            let r = lemma1_check(&LemmaInstance::identity(k, m)).unwrap();
            assert!(r.passed());
            assert!(r.slack_log().abs() <= 1e-10);
        }
    }

    #[test]
    fn lemma_zero_diagonal_passes() {
        let mut inst = LemmaInstance::identity(3, 1);
        inst.g[1][1] = 0.0;
        inst.g[2][0] = 0.7;
        let r = lemma1_check(&inst).unwrap();
        assert_eq!(r.lhs_log, f64::NEG_INFINITY);
        assert!(r.passed());
    }

    #[test]
    fn lemma_rejects_bad_instances() {
        let mut inst = LemmaInstance::identity(3, 1);
        inst.w_basis[0][1] = 0.1;
        assert!(lemma1_check(&inst).is_err());
        assert!(lemma1_check(&LemmaInstance::identity(3, 3)).is_err());
        let mut inst = LemmaInstance::identity(3, 1);
        inst.g[0][2] = 1.0;
        assert!(lemma1_check(&inst).is_err());
    }

    #[test]
    fn lemma_random_instances() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..1000 {
            let inst = LemmaInstance::random(&mut rng, 8);
            let r = lemma1_check(&inst).unwrap();
            assert!(r.slack_log() >= (-1e-10f64).ln_1p(), "{r:?}");
        }
    }

    #[test]
    fn hilbert_theorem_example() {
        let sigmas = [1.0, 0.5, 0.25, 0.125];
        let d = widths_from(&sigmas);
        let r = theorem_hilbert_check(&sigmas, &d, 0, 2, 1, 1.0).unwrap();
        assert_abs_diff_eq!(r.lhs(), 1.0 / 64.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.rhs(), 0.25, epsilon = 1e-15);
        assert!(r.passed());
        assert!(theorem_hilbert_check(&sigmas, &d, 0, 1, 1, 1.0).is_err());
        assert!(theorem_hilbert_check(&sigmas, &d, 2, 2, 1, 1.0).is_err());
    }

    #[test]
    fn banach_slack_exceeds_hilbert_slack() {
        let sigmas = [1.0, 0.5, 0.25, 0.125];
        let d = widths_from(&sigmas);
        let h = theorem_hilbert_check(&sigmas, &d, 0, 2, 1, 1.0).unwrap();
        let b = theorem_banach_check(&sigmas, &d, 0, 2, 1, 1.0).unwrap();
        assert!(b.passed());
        assert!(b.slack_log() > h.slack_log());
    }

    #[test]
    fn zero_sigma_passes() {
        let sigmas = [1.0, 0.0, 0.0];
        let d = widths_from(&[1.0, 0.0, 0.0]);
        let r = theorem_hilbert_check(&sigmas, &d, 0, 2, 1, 1.0).unwrap();
        assert!(r.passed());
        assert_eq!(r.slack_log(), f64::INFINITY);
    }

    #[test]
    fn degenerate_banach_reduces_to_prefactor() {
        let sigmas = [1.0; 5];
        let d = widths_from(&[1.0; 5]);
        for k in 2..=4 {
            for m in 1..k {
                let r = theorem_banach_check(&sigmas, &d, 0, k, m, 1.0).unwrap();
                let (kf, mf) = (k as f64, m as f64);
                let expected = kf * 2f64.ln() + (kf - mf) * kf.ln() + mf * kf.ln();
                assert_abs_diff_eq!(r.slack_log(), expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn sweep_covers_admissible_triples() {
        let sigmas = [1.0, 0.5, 0.25, 0.125, 0.0625];
        let d = widths_from(&sigmas);
        let r = theorem_sweep(&sigmas, &d, 1.0, 3, Path::Hilbert).unwrap();
        // N + K ≤ 4: (K=2: N=0..2, 1 m each) + (K=3: N=0..1, 2 m each)
        assert_eq!(r.len(), 3 + 4);
        assert!(r.iter().all(BoundReport::passed));
    }

    #[test]
    fn c1_i_holds_for_harmonic_diagonal() {
        let sigmas: Vec<f64> = (0..=128).map(|j| 1.0 / (j as f64 + 1.0)).collect();
        let d = widths_from(&sigmas);
        let rate = RateParams::new(1.0, 1.0, 1.0, 1.0);
        let r = corollary_checks(&sigmas, &d, &rate, &[Corollary::C1I]).unwrap();
        let standalone: Vec<_> = r.iter().filter(|r| r.name == "C1_i").collect();
        assert_eq!(standalone.len(), 64);
        assert!(r.iter().all(BoundReport::passed));
    }

    #[test]
    fn c1_i_special_case_matches_min_form_term() {
        let d: f64 = 0.3;
        for m in 1..10 {
            let special = LN_SQRT2 - 0.5f64.ln() + 0.5 * d.ln();
            assert_eq!(c11_term_log(d, 2 * m, m, 0.5), special);
        }
    }

    #[test]
    fn hypothesis_unmet_is_reported() {
        let sigmas = [1.0, 1.0, 1.0, 1.0];
        let d = widths_from(&[1.0, 1.0, 1.0, 1.0]);
        let rate = RateParams::new(1.0, 1.0, 1.0, 1.0);
        let r = corollary_checks(&sigmas, &d, &rate, &[Corollary::C1Ii]).unwrap();
        assert!(r.iter().all(|r| r.verdict == Verdict::HypothesisUnmet));
        assert!(r[0].notes.contains("n=2"));
    }

    #[test]
    fn gamma_scaling_of_rhs() {
        let sigmas: Vec<f64> = (0..=16).map(|j| 1.0 / (j as f64 + 1.0)).collect();
        let d = widths_from(&sigmas);
        let all = Corollary::ALL;
        let mut one = RateParams::new(1.0, 1.0, 1.0, 1.0);
        one.beta = Some(0.25);
        let half = RateParams { gamma: 0.5, ..one };
        let a = corollary_checks(&sigmas, &d, &one, &all).unwrap();
        let b = corollary_checks(&sigmas, &d, &half, &all).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            if x.name == "C2_ii" {
                continue;
            }
            let power = if x.name == "C1_ii" { 2.0 } else { 1.0 };
            assert_abs_diff_eq!(y.rhs_log - x.rhs_log, power * 2f64.ln(), epsilon = 1e-12);
        }
        // C2_ii: the first term dominates and carries γ^{−4}
        let c_one = one.c1_banach_poly().unwrap();
        let c_half = half.c1_banach_poly().unwrap();
        assert_abs_diff_eq!(c_half / c_one, 16.0, epsilon = 1e-9);
    }

    #[test]
    fn constants_follow_the_formulas() {
        let r = RateParams::new(1.0, 1.0, 2.0, 0.5);
        assert_abs_diff_eq!(r.c1_hilbert_poly(), 2f64.powi(6) * 4.0);
        assert_abs_diff_eq!(r.c1_exp(), 2.0 / 8.0);
        let mut b = RateParams::new(1.0, 1.0, 1.0, 1.0);
        assert!(b.c1_banach_poly().is_err());
        b.beta = Some(0.5);
        assert!(b.c1_banach_poly().is_err());
        b.beta = Some(0.25);
        assert_abs_diff_eq!(b.c1_banach_poly().unwrap(), 4f64.powi(5) * 3.0, epsilon = 1e-9);
    }

    #[test]
    fn reference_rate_examples() {
        let r = RateParams::new(1.0, 1.0, 1.0, 1.0);
        let v = reference_rates(&r, 1, 0.3);
        assert_eq!(v.beta, 0.5);
        assert_abs_diff_eq!(v.exponential_loss, 0.6);
    }
}
