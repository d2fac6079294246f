//! Kolmogorov width values and bounds.
//!
//! `d_n(F) = inf_{dim Y = n} max_{f ∈ F} dist(f, Y)`. Exact values are rarely
//! available, so every entry carries a tag saying whether it is exact, an
//! upper bound or a lower bound, plus the method that produced it.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{distance, SolverOptions, Subspace};
use crate::error::{Error, Result};
use crate::greedy::{run_weak_greedy, WeakGreedyParams};
use crate::rng;
use crate::seqspace::{DenseVector, NormKind};
use crate::sets::{known_widths, CompactSet};

/// Relative cutoff below which a singular value counts as zero.
pub const SVD_RANK_TOL: f64 = 1e-12;

const JACOBI_MAX_SWEEPS: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthTag {
    Exact,
    Upper,
    Lower,
}

impl fmt::Display for WidthTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WidthTag::Exact => "exact",
            WidthTag::Upper => "upper",
            WidthTag::Lower => "lower",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthEntry {
    pub n: usize,
    pub value: f64,
    pub tag: WidthTag,
    pub method: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WidthSequence {
    pub entries: Vec<WidthEntry>,
}

impl WidthSequence {
    pub fn push(&mut self, n: usize, value: f64, tag: WidthTag, method: &str) {
        self.entries.push(WidthEntry {
            n,
            value,
            tag,
            method: method.to_string(),
        });
    }

    fn at(&self, n: usize) -> impl Iterator<Item = &WidthEntry> {
        self.entries.iter().filter(move |e| e.n == n)
    }

    pub fn exact(&self, n: usize) -> Option<f64> {
        self.at(n)
            .find(|e| e.tag == WidthTag::Exact)
            .map(|e| e.value)
    }

    /// Tightest known upper bound on `d_n` (exact values included).
    pub fn upper(&self, n: usize) -> Option<f64> {
        self.at(n)
            .filter(|e| e.tag != WidthTag::Lower)
            .map(|e| e.value)
            .reduce(f64::min)
    }

    /// Tightest known lower bound on `d_n` (exact values included).
    pub fn lower(&self, n: usize) -> Option<f64> {
        self.at(n)
            .filter(|e| e.tag != WidthTag::Upper)
            .map(|e| e.value)
            .reduce(f64::max)
    }

    pub fn max_n(&self) -> Option<usize> {
        self.entries.iter().map(|e| e.n).max()
    }

    /// `lower ≤ upper + tol` at every `n`.
    pub fn is_consistent(&self, tol: f64) -> bool {
        (0..=self.max_n().unwrap_or(0)).all(|n| match (self.lower(n), self.upper(n)) {
            (Some(l), Some(u)) => l <= u + tol,
            _ => true,
        })
    }

    /// Keeps one best entry per `(n, class)`, propagating uppers to larger
    /// `n` and lowers to smaller `n` (widths are non-increasing).
    pub fn tightened(&self, n_max: usize) -> WidthSequence {
        let best = |n: usize, want_upper: bool| -> Option<&WidthEntry> {
            let mut it = self.at(n).filter(|e| match e.tag {
                WidthTag::Exact => true,
                WidthTag::Upper => want_upper,
                WidthTag::Lower => !want_upper,
            });
            let first = it.next()?;
            Some(it.fold(first, |b, e| {
                let better = if want_upper {
                    e.value < b.value || (e.value == b.value && e.tag == WidthTag::Exact)
                } else {
                    e.value > b.value || (e.value == b.value && e.tag == WidthTag::Exact)
                };
                if better {
                    e
                } else {
                    b
                }
            }))
        };

        let mut uppers: Vec<Option<WidthEntry>> = Vec::with_capacity(n_max + 1);
        let mut running: Option<WidthEntry> = None;
        for n in 0..=n_max {
            if let Some(e) = best(n, true) {
                if running.as_ref().is_none_or(|r| e.value <= r.value) {
                    running = Some(e.clone());
                }
            }
            uppers.push(running.clone().map(|mut r| {
                if r.n != n && r.tag == WidthTag::Exact {
                    r.tag = WidthTag::Upper;
                }
                r.n = n;
                r
            }));
        }

        let mut lowers: Vec<Option<WidthEntry>> = vec![None; n_max + 1];
        let mut running: Option<WidthEntry> = None;
        for n in (0..=n_max).rev() {
            if let Some(e) = best(n, false) {
                if running.as_ref().is_none_or(|r| e.value >= r.value) {
                    running = Some(e.clone());
                }
            }
            lowers[n] = running.clone().map(|mut r| {
                if r.n != n && r.tag == WidthTag::Exact {
                    r.tag = WidthTag::Lower;
                }
                r.n = n;
                r
            });
        }

        let mut out = WidthSequence::default();
        for (u, l) in uppers.into_iter().zip(lowers) {
            match (u, l) {
                (Some(u), Some(l)) if u.tag == WidthTag::Exact || u.value == l.value => {
                    let mut e = if u.tag == WidthTag::Exact { u } else { l };
                    e.tag = WidthTag::Exact;
                    out.entries.push(e);
                }
                (u, l) => {
                    out.entries.extend(u);
                    out.entries.extend(l);
                }
            }
        }
        out
    }
}

/// Singular values (descending) and matching left singular vectors of the
/// matrix whose columns are given; only numerically nonzero ones are kept.
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub left: Vec<Vec<f64>>,
}

/// One-sided Jacobi SVD.
pub fn jacobi_svd(columns: &[Vec<f64>]) -> Svd {
    let mut cols: Vec<Vec<f64>> = columns.to_vec();
    let m = cols.len();
    let eps = f64::EPSILON;
    // columns below this squared norm are round-off and never converge against each other
    let total: f64 = cols.iter().flatten().map(|x| x * x).sum();
    let negligible = (m as f64 * eps).powi(2) * total;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..m {
            for q in p + 1..m {
                let (a, b, g) = {
                    let (cp, cq) = (&cols[p], &cols[q]);
                    let mut a = 0.0;
                    let mut b = 0.0;
                    let mut g = 0.0;
                    for (x, y) in cp.iter().zip(cq) {
                        a += x * x;
                        b += y * y;
                        g += x * y;
                    }
                    (a, b, g)
                };
                if g == 0.0 || g.abs() <= eps * (a * b).sqrt() || a.min(b) <= negligible {
                    continue;
                }
                rotated = true;
                let zeta = (b - a) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (lo, hi) = cols.split_at_mut(q);
                for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = c * xp - s * yq;
                    *y = s * xp + c * yq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut pairs: Vec<(f64, Vec<f64>)> = cols
        .into_iter()
        .map(|c| (c.iter().map(|x| x * x).sum::<f64>().sqrt(), c))
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let top = pairs.first().map_or(0.0, |p| p.0);
    let (singular_values, left) = pairs
        .into_iter()
        .filter(|(s, _)| *s > SVD_RANK_TOL * top && *s > 0.0)
        .map(|(s, c)| (s, c.into_iter().map(|x| x / s).collect()))
        .unzip();
    Svd {
        singular_values,
        left,
    }
}

/// Snapshot-subspace upper bounds for every `n` from one SVD.
pub struct SnapshotWidths<'a> {
    set: &'a CompactSet,
    svd: Svd,
    opts: SolverOptions,
}

impl<'a> SnapshotWidths<'a> {
    pub fn new(set: &'a CompactSet, opts: SolverOptions) -> Self {
        let cols: Vec<Vec<f64>> = set.elements.iter().map(|f| f.as_slice().to_vec()).collect();
        Self {
            set,
            svd: jacobi_svd(&cols),
            opts,
        }
    }

    pub fn rank(&self) -> usize {
        self.svd.singular_values.len()
    }

    /// `max_f dist(f, U_n)` in the set's norm, `U_n` the top-`n` left
    /// singular subspace.
    pub fn upper(&self, n: usize) -> Result<f64> {
        if n >= self.rank() {
            return Ok(0.0);
        }
        let dim = self.set.ambient_dim();
        let basis = self.svd.left[..n]
            .iter()
            .map(|u| DenseVector::new(u.clone()))
            .collect::<Result<Vec<_>>>()?;
        let space = Subspace::new(dim, basis)?;
        let kind = self.set.norm_kind;
        let d = self
            .set
            .elements
            .par_iter()
            .map(|f| distance(f, &space, kind, &self.opts).map(|r| r.distance))
            .collect::<Result<Vec<_>>>()?;
        Ok(d.into_iter().fold(0.0, f64::max))
    }
}

pub fn width_upper_svd(set: &CompactSet, n: usize) -> Result<f64> {
    SnapshotWidths::new(set, SolverOptions::default()).upper(n)
}

/// Outcome of the random-subspace construction for one level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomSubspaceWidth {
    pub n_level: u32,
    /// `dim span E`, at most `2^{n+1}`.
    pub dim: usize,
    pub trials: Vec<f64>,
    pub min: f64,
    pub median: f64,
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let k = s.len();
    if k % 2 == 1 {
        s[k / 2]
    } else {
        0.5 * (s[k / 2 - 1] + s[k / 2])
    }
}

/// Block index `b` of position `j` in the dyadic layout (`2^{b−1} ≤ j < 2^b`, block 0 = `{0}`).
fn block_of(j: usize) -> u32 {
    usize::BITS - j.leading_zeros()
}

/// The space `E` for level `n`: coordinates of blocks `0..=n`, plus for
/// `k = 1..=n` a Gaussian random subspace of dimension `2^{n−k}` supported on
/// block `n + k`.
fn random_space(dim: usize, n: u32, rng: &mut rng::StreamRng) -> Result<Subspace> {
    use rand_distr::{Distribution, StandardNormal};
    let mut basis = Vec::new();
    for j in 0..(1usize << n).min(dim) {
        basis.push(DenseVector::unit(dim, j));
    }
    for k in 1..=n {
        let b = n + k;
        let lo = 1usize << (b - 1);
        let hi = (1usize << b).min(dim);
        if lo >= dim {
            break;
        }
        for _ in 0..(1usize << (n - k)) {
            let mut v = vec![0.0; dim];
            for x in &mut v[lo..hi] {
                *x = StandardNormal.sample(rng);
            }
            basis.push(DenseVector::new(v)?);
        }
    }
    Subspace::new(dim, basis)
}

/// Upper bound on `d_N`, `N ≤ 2^{n+1}`, for a dyadic-blocks set in `ℓ_∞`.
pub fn width_upper_random_subspace(
    set: &CompactSet,
    n_level: u32,
    trials: usize,
    seed: u64,
) -> Result<RandomSubspaceWidth> {
    if trials < 1 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if !matches!(set.spec, crate::sets::CompactSetSpec::DyadicBlocks { .. }) {
        return Err(Error::InvalidSet("random-subspace widths need a dyadic-blocks set".into()));
    }
    if set.norm_kind != NormKind::LInf {
        return Err(Error::WrongMode { expected: "linf" });
    }
    let dim = set.ambient_dim();
    let opts = SolverOptions::default();
    let results = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::stream(seed, &format!("widths/random_subspace/{n_level}/{t}"));
            let space = random_space(dim, n_level, &mut r)?;
            let dists = set
                .elements
                .iter()
                .enumerate()
                .map(|(j, f)| {
                    if block_of(j) <= n_level {
                        Ok(0.0)
                    } else {
                        distance(f, &space, NormKind::LInf, &opts).map(|r| r.distance)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((space.dim_span(), dists.into_iter().fold(0.0, f64::max)))
        })
        .collect::<Result<Vec<(usize, f64)>>>()?;
    let dim_e = results.iter().map(|r| r.0).max().unwrap_or(0);
    let values: Vec<f64> = results.into_iter().map(|r| r.1).collect();
    Ok(RandomSubspaceWidth {
        n_level,
        dim: dim_e,
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        median: median(&values),
        trials: values,
    })
}

/// Unit directions on a hyperspherical angular grid covering every line
/// through the origin once; also returns the covering radius.
fn direction_grid(dim: usize, grid: usize) -> (Vec<Vec<f64>>, f64) {
    if dim == 1 {
        return (vec![vec![1.0]], 0.0);
    }
    let h = std::f64::consts::PI / grid as f64;
    let angles = dim - 1;
    let mut out = Vec::with_capacity(grid.pow(angles as u32));
    let mut idx = vec![0usize; angles];
    loop {
        let phi: Vec<f64> = idx.iter().map(|&i| (i as f64 + 0.5) * h).collect();
        let mut u = vec![0.0; dim];
        let mut s = 1.0;
        for (k, p) in phi.iter().enumerate() {
            u[k] = s * p.cos();
            s *= p.sin();
        }
        u[dim - 1] = s;
        out.push(u);
        let mut k = 0;
        while k < angles {
            idx[k] += 1;
            if idx[k] < grid {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == angles {
            break;
        }
    }
    // each angle is within h/2 of a grid value and each partial derivative has norm ≤ 1
    (out, angles as f64 * h / 2.0)
}

/// Grid-search bracket `(lower, upper)` for `d_1` on tiny instances.
pub fn width_brute_force(set: &CompactSet, n: usize, grid: usize) -> Result<(f64, f64)> {
    let dim = set.ambient_dim();
    if n != 1 {
        return Err(Error::InvalidArgument("brute force supports n = 1 only".into()));
    }
    if dim > 4 || dim == 0 {
        return Err(Error::InvalidArgument(format!(
            "brute force needs ambient dimension 1..=4, got {dim}"
        )));
    }
    if grid < 1 {
        return Err(Error::InvalidArgument("grid must be at least 1".into()));
    }
    let kind = set.norm_kind;
    let opts = SolverOptions::default();
    let (dirs, delta) = direction_grid(dim, grid);
    let upper = dirs
        .par_iter()
        .map(|u| {
            let space = Subspace::new(dim, vec![DenseVector::new(u.clone())?])?;
            set.elements.iter().try_fold(0.0f64, |m, f| {
                Ok(m.max(distance(f, &space, kind, &opts)?.distance))
            })
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    // |dist(f, span u) − dist(f, span u')| ≤ |t*| ‖u − u'‖_X with |t*| ≤ 2‖f‖_X / ‖u‖_X
    let kappa = kind.max_ratio_to_l2(dim) / kind.min_ratio_to_l2(dim);
    let slack = 2.0 * set.max_norm() * kappa * delta;
    Ok(((upper - slack).max(0.0), upper))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthMethod {
    /// Values read off the set's structure.
    Analytic,
    /// Snapshot SVD subspaces.
    Svd,
    /// Greedy errors `σ_n ≥ d_n` of a `γ = 1` run.
    Greedy,
    /// Angular grid search for `d_1` (ambient dimension ≤ 4).
    BruteForce { grid: usize },
}

impl WidthMethod {
    pub fn label(&self) -> &'static str {
        match self {
            WidthMethod::Analytic => "analytic",
            WidthMethod::Svd => "svd",
            WidthMethod::Greedy => "greedy",
            WidthMethod::BruteForce { .. } => "brute_force",
        }
    }
}

/// Merges the requested width methods into one tightened sequence for `0..=n_max`.
pub fn assemble_widths(
    set: &CompactSet,
    n_max: usize,
    methods: &[WidthMethod],
) -> Result<WidthSequence> {
    let mut raw = WidthSequence::default();
    raw.push(0, set.max_norm(), WidthTag::Exact, "norm");
    for m in methods {
        match m {
            WidthMethod::Analytic => {
                if let Some(seq) = known_widths(&set.spec, n_max) {
                    // the analytic values are in terms of the diagonal entries,
                    // which are norms in every ℓ_p
                    raw.entries.extend(seq.entries);
                }
            }
            WidthMethod::Svd => {
                let snap = SnapshotWidths::new(set, SolverOptions::default());
                for n in 1..=n_max {
                    raw.push(n, snap.upper(n)?, WidthTag::Upper, m.label());
                    if n >= snap.rank() {
                        break;
                    }
                }
            }
            WidthMethod::Greedy => {
                let steps = n_max.min(set.len());
                let trace = run_weak_greedy(set, &WeakGreedyParams::new(steps))?;
                for (n, s) in trace.sigmas.iter().enumerate().skip(1) {
                    raw.push(n, *s, WidthTag::Upper, m.label());
                }
            }
            WidthMethod::BruteForce { grid } => {
                if n_max >= 1 && set.ambient_dim() <= 4 {
                    let (lo, hi) = width_brute_force(set, 1, *grid)?;
                    raw.push(1, lo, WidthTag::Lower, m.label());
                    raw.push(1, hi, WidthTag::Upper, m.label());
                }
            }
        }
    }
    // n ≥ dim: the whole space is available
    let dim = set.ambient_dim();
    if dim <= n_max {
        raw.push(dim, 0.0, WidthTag::Exact, "full_space");
    }
    Ok(raw.tightened(n_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::{realize, CompactSetSpec};
    use approx::assert_abs_diff_eq;

    fn diagonal(x: &[f64], kind: NormKind) -> CompactSet {
        realize(&CompactSetSpec::Diagonal { x: x.to_vec() }, kind).unwrap()
    }

    #[test]
    fn svd_examples() {
        let set = diagonal(&[1.0, 0.5, 0.25], NormKind::Hilbert);
        assert_abs_diff_eq!(width_upper_svd(&set, 1).unwrap(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(width_upper_svd(&set, 0).unwrap(), 1.0, epsilon = 1e-14);
        assert_eq!(width_upper_svd(&set, 3).unwrap(), 0.0);
        assert_eq!(width_upper_svd(&set, 7).unwrap(), 0.0);
    }

    #[test]
    fn jacobi_matches_nalgebra() {
        let set = realize(
            &CompactSetSpec::RandomBall {
                dim: 7,
                count: 11,
                seed: 5,
            },
            NormKind::Hilbert,
        )
        .unwrap();
        let cols: Vec<Vec<f64>> = set.elements.iter().map(|f| f.as_slice().to_vec()).collect();
        let ours = jacobi_svd(&cols);
        let m = nalgebra::DMatrix::from_fn(7, 11, |i, j| cols[j][i]);
        let mut theirs: Vec<f64> = m.singular_values().iter().copied().collect();
        theirs.sort_by(|a, b| b.total_cmp(a));
        assert_eq!(ours.singular_values.len(), 7);
        for (a, b) in ours.singular_values.iter().zip(&theirs) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
        for (i, u) in ours.left.iter().enumerate() {
            for (j, v) in ours.left.iter().enumerate() {
                let d: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
                assert_abs_diff_eq!(d, if i == j { 1.0 } else { 0.0 }, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn svd_bounds_are_monotone() {
        let set = realize(
            &CompactSetSpec::RandomBall {
                dim: 6,
                count: 12,
                seed: 9,
            },
            NormKind::Hilbert,
        )
        .unwrap();
        let snap = SnapshotWidths::new(&set, SolverOptions::default());
        let v: Vec<f64> = (0..=7).map(|n| snap.upper(n).unwrap()).collect();
        for w in v.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        assert_eq!(v[6], 0.0);
    }

    #[test]
    fn brute_force_examples() {
        // the tilted line with tan φ = 1/2 balances both errors at 1/√5 < x_1
        let set = diagonal(&[1.0, 0.5], NormKind::Hilbert);
        let (lo, hi) = width_brute_force(&set, 1, 2000).unwrap();
        let d1 = 0.2f64.sqrt();
        assert!(lo <= d1 && d1 <= hi + 1e-12, "({lo}, {hi})");
        assert!(hi - d1 <= hi - lo);

        let collinear = CompactSet {
            elements: vec![
                DenseVector::new(vec![0.6, 0.0]).unwrap(),
                DenseVector::new(vec![0.3, 0.0]).unwrap(),
            ],
            norm_kind: NormKind::Hilbert,
            spec: CompactSetSpec::Diagonal { x: vec![0.6, 0.3] },
        };
        let (lo, hi) = width_brute_force(&collinear, 1, 101).unwrap();
        assert_eq!(lo, 0.0);
        assert!(hi < 0.02);

        // two orthogonal unit vectors: the diagonal line leaves 1/√2 for both
        let set = diagonal(&[1.0, 1.0], NormKind::Hilbert);
        let (lo, hi) = width_brute_force(&set, 1, 1000).unwrap();
        assert!(lo <= 0.5f64.sqrt() && 0.5f64.sqrt() <= hi + 1e-12);
        assert!(hi - 0.5f64.sqrt() <= hi - lo);

        assert!(width_brute_force(&set, 2, 10).is_err());
        let big = diagonal(&[1.0; 5], NormKind::Hilbert);
        assert!(width_brute_force(&big, 1, 10).is_err());
    }

    #[test]
    fn direction_grid_covers_sphere() {
        for dim in 2..=4 {
            let (dirs, delta) = direction_grid(dim, 6);
            assert_eq!(dirs.len(), 6usize.pow(dim as u32 - 1));
            for u in &dirs {
                assert_abs_diff_eq!(u.iter().map(|x| x * x).sum::<f64>(), 1.0, epsilon = 1e-14);
            }
            // probe a few fixed unit vectors
            let probes = [vec![1.0; dim], (0..dim).map(|i| i as f64 - 1.3).collect::<Vec<_>>()];
            for p in probes {
                let n = p.iter().map(|x| x * x).sum::<f64>().sqrt();
                let best = dirs
                    .iter()
                    .map(|u| {
                        let plus: f64 = u.iter().zip(&p).map(|(a, b)| (a - b / n).powi(2)).sum();
                        let minus: f64 = u.iter().zip(&p).map(|(a, b)| (a + b / n).powi(2)).sum();
                        plus.min(minus).sqrt()
                    })
                    .fold(f64::INFINITY, f64::min);
                assert!(best <= delta + 1e-12);
            }
        }
    }

    #[test]
    fn assemble_diagonal_agrees_across_routes() {
        let x = [1.0, 0.5, 0.25, 0.125];
        let set = diagonal(&x, NormKind::Hilbert);
        let a = assemble_widths(&set, 4, &[WidthMethod::Analytic]).unwrap();
        let s = assemble_widths(&set, 4, &[WidthMethod::Svd]).unwrap();
        for n in 0..=4 {
            assert_abs_diff_eq!(a.upper(n).unwrap(), s.upper(n).unwrap(), epsilon = 1e-10);
        }
        assert_eq!(a.upper(2), Some(0.25));
        assert_eq!(a.exact(4), Some(0.0));
    }

    #[test]
    fn assemble_without_methods_has_only_d0() {
        let set = diagonal(&[0.8, 0.5, 0.25], NormKind::LInf);
        let w = assemble_widths(&set, 2, &[]).unwrap();
        assert_eq!(w.exact(0), Some(0.8));
        // later n inherit d_0 as an upper bound only
        assert_eq!(w.upper(2), Some(0.8));
        assert_eq!(w.exact(2), None);
        assert_eq!(w.lower(2), None);
    }

    #[test]
    fn assembled_bounds_sandwich() {
        let set = realize(
            &CompactSetSpec::RandomBall {
                dim: 3,
                count: 6,
                seed: 2,
            },
            NormKind::Hilbert,
        )
        .unwrap();
        let methods = [
            WidthMethod::Svd,
            WidthMethod::Greedy,
            WidthMethod::BruteForce { grid: 200 },
        ];
        let w = assemble_widths(&set, 3, &methods).unwrap();
        assert!(w.is_consistent(1e-6));
        for n in 0..3 {
            assert!(w.upper(n + 1).unwrap() <= w.upper(n).unwrap());
        }
        assert_eq!(w.exact(3), Some(0.0));
    }

    #[test]
    fn tightening_propagates_in_both_directions() {
        let mut w = WidthSequence::default();
        w.push(0, 1.0, WidthTag::Exact, "a");
        w.push(1, 0.7, WidthTag::Upper, "a");
        w.push(2, 0.9, WidthTag::Upper, "b");
        w.push(2, 0.3, WidthTag::Lower, "c");
        let t = w.tightened(3);
        assert_eq!(t.upper(2), Some(0.7));
        assert_eq!(t.upper(3), Some(0.7));
        assert_eq!(t.lower(1), Some(0.3));
        assert_eq!(t.lower(3), None);
        assert_eq!(t.exact(0), Some(1.0));
    }

    #[test]
    fn random_subspace_examples() {
        let set = realize(
            &CompactSetSpec::DyadicBlocks {
                alpha: 1.0,
                levels: 3,
            },
            NormKind::LInf,
        )
        .unwrap();
        // n = 1: blocks 0, 1 exact; block 2 gets one random direction;
        // block 3 (value 1/8) is not covered at all
        let r = width_upper_random_subspace(&set, 1, 4, 11).unwrap();
        assert_eq!(r.trials.len(), 4);
        assert!(r.dim <= 4);
        assert!(r.min <= r.median);
        assert!(r.min >= 0.125 && r.min <= 0.25);
        assert!(width_upper_random_subspace(&set, 1, 0, 11).is_err());
        let again = width_upper_random_subspace(&set, 1, 4, 11).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn d0_matches_greedy_sigma0() {
        let set = diagonal(&[0.9, 0.5], NormKind::Lp(3.0));
        let t = run_weak_greedy(&set, &WeakGreedyParams::new(1)).unwrap();
        let w = assemble_widths(&set, 1, &[]).unwrap();
        assert_abs_diff_eq!(w.exact(0).unwrap(), t.sigmas[0], epsilon = 1e-12);
    }
}
