//! Finite compact families `F = {f_0, …, f_{M−1}}` in the unit ball.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greedy::{p1_violations, p2_violations};
use crate::rng;
use crate::seqspace::{norm, DenseVector, NormKind};
use crate::widths::{WidthSequence, WidthTag};

/// Elements must satisfy `‖f‖ ≤ 1 + UNIT_BALL_SLACK`.
pub const UNIT_BALL_SLACK: f64 = 1e-12;

/// Declarative description of a compact set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CompactSetSpec {
    /// `f_j = x_j e_j` with `x` positive and non-increasing.
    Diagonal { x: Vec<f64> },
    /// Rows of a lower-triangular matrix satisfying P1/P2 for `gamma`.
    ///
    /// `sigmas` lists `σ_0, …, σ_M` for an `M × M` matrix; the last entry
    /// is the terminal value and must be zero.
    FromMatrix {
        a: Vec<Vec<f64>>,
        sigmas: Vec<f64>,
        gamma: f64,
    },
    /// Diagonal set with value `2^{−kα}` on positions `2^{k−1} ≤ j ≤ 2^k − 1`
    /// and `x_0 = 1`, truncated to `2^levels` elements.
    DyadicBlocks { alpha: f64, levels: u32 },
    RandomBall { dim: usize, count: usize, seed: u64 },
    /// Normalized monomial snapshots `(1, μ, μ², …)` over a uniform `μ` grid.
    ParametricSurrogate {
        dim: usize,
        count: usize,
        mu_range: (f64, f64),
    },
}

#[derive(Debug, Clone)]
pub struct CompactSet {
    pub elements: Vec<DenseVector>,
    pub norm_kind: NormKind,
    pub spec: CompactSetSpec,
}

impl CompactSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.elements.first().map_or(0, DenseVector::dim)
    }

    /// `max_f ‖f‖`, i.e. `d_0 = σ_0`.
    pub fn max_norm(&self) -> f64 {
        self.elements
            .iter()
            .map(|f| norm(f, self.norm_kind))
            .fold(0.0, f64::max)
    }

    /// Same elements measured in another norm (unit-ball invariant re-checked).
    pub fn with_norm(&self, kind: NormKind) -> Result<CompactSet> {
        let set = CompactSet {
            elements: self.elements.clone(),
            norm_kind: kind.validate()?,
            spec: self.spec.clone(),
        };
        set.check_unit_ball()?;
        Ok(set)
    }

    fn check_unit_ball(&self) -> Result<()> {
        for (i, f) in self.elements.iter().enumerate() {
            let n = norm(f, self.norm_kind);
            if n > 1.0 + UNIT_BALL_SLACK {
                return Err(Error::InvalidSet(format!(
                    "element {i} has {} norm {n} > 1",
                    self.norm_kind
                )));
            }
        }
        Ok(())
    }
}

impl CompactSetSpec {
    /// `2^{−kα}` block values, `x_0 = 1`.
    pub fn dyadic_values(alpha: f64, levels: u32) -> Vec<f64> {
        let count = 1usize << levels;
        (0..count)
            .map(|j| {
                if j == 0 {
                    1.0
                } else {
                    let k = usize::BITS - j.leading_zeros(); // 2^{k-1} ≤ j < 2^k
                    2f64.powf(-(k as f64) * alpha)
                }
            })
            .collect()
    }

    /// Diagonal values `x_j` for diagonal kinds.
    pub fn diagonal_values(&self) -> Option<Vec<f64>> {
        match self {
            CompactSetSpec::Diagonal { x } => Some(x.clone()),
            CompactSetSpec::DyadicBlocks { alpha, levels } => {
                Some(Self::dyadic_values(*alpha, *levels))
            }
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSet(m));
        match self {
            CompactSetSpec::Diagonal { x } => {
                if x.is_empty() {
                    return Err(Error::EmptySet);
                }
                if x.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                    return bad("diagonal values must be finite and strictly positive".into());
                }
                if x.windows(2).any(|w| w[1] > w[0]) {
                    return bad("diagonal values must be non-increasing".into());
                }
            }
            CompactSetSpec::DyadicBlocks { alpha, levels } => {
                if !(alpha.is_finite() && *alpha > 0.5) {
                    return bad(format!("dyadic blocks need alpha > 1/2, got {alpha}"));
                }
                if *levels > 24 {
                    return bad(format!("levels = {levels} is too large"));
                }
            }
            CompactSetSpec::FromMatrix { a, sigmas, gamma } => {
                let m = a.len();
                if m == 0 {
                    return Err(Error::EmptySet);
                }
                if !(*gamma > 0.0 && *gamma <= 1.0) {
                    return bad(format!("gamma must lie in (0, 1], got {gamma}"));
                }
                for (i, row) in a.iter().enumerate() {
                    if row.len() != m {
                        return bad(format!("row {i} has {} entries, expected {m}", row.len()));
                    }
                    if row[i + 1..].iter().any(|v| *v != 0.0) {
                        return bad(format!("row {i} has entries above the diagonal"));
                    }
                }
                if sigmas.len() != m + 1 {
                    return bad(format!(
                        "expected {} sigmas (σ_0..σ_{m}), got {}",
                        m + 1,
                        sigmas.len()
                    ));
                }
                if sigmas.windows(2).any(|w| w[1] > w[0]) || sigmas.iter().any(|s| *s < 0.0) {
                    return bad("sigmas must be non-negative and non-increasing".into());
                }
                if sigmas[m] != 0.0 {
                    return bad("sigmas must decrease to zero (σ_M = 0)".into());
                }
                let tol = 1e-12;
                if let Some(v) = p1_violations(a, sigmas, *gamma, tol).first() {
                    return bad(format!("P1 fails at n = {}: |a_nn| = {}", v.0, v.1));
                }
                if let Some(v) = p2_violations(a, sigmas, tol).first() {
                    return bad(format!("P2 fails at n = {}, m = {}", v.0, v.1));
                }
            }
            CompactSetSpec::RandomBall { dim, count, .. } => {
                if *dim == 0 || *count == 0 {
                    return Err(Error::EmptySet);
                }
            }
            CompactSetSpec::ParametricSurrogate {
                dim,
                count,
                mu_range,
            } => {
                if *dim == 0 || *count == 0 {
                    return Err(Error::EmptySet);
                }
                if !(mu_range.0.is_finite() && mu_range.1.is_finite() && mu_range.0 <= mu_range.1)
                {
                    return bad(format!("invalid mu range {mu_range:?}"));
                }
            }
        }
        Ok(())
    }

    /// Diagonal set `x_j = C_0 (j+1)^{−α}`, so that `d_n ≤ x_n ≤ C_0 n^{−α}`.
    pub fn diagonal_poly(count: usize, big_c0: f64, alpha: f64) -> CompactSetSpec {
        CompactSetSpec::Diagonal {
            x: (0..count)
                .map(|j| big_c0 * ((j + 1) as f64).powf(-alpha))
                .collect(),
        }
    }

    /// Diagonal set `x_j = C_0 e^{−c_0 j^α}`, so that `d_n ≤ x_n`.
    pub fn diagonal_exp(count: usize, big_c0: f64, small_c0: f64, alpha: f64) -> CompactSetSpec {
        CompactSetSpec::Diagonal {
            x: (0..count)
                .map(|j| big_c0 * (-small_c0 * (j as f64).powf(alpha)).exp())
                .collect(),
        }
    }

    /// Builds a valid `FromMatrix` spec whose sigmas are the exact tail maxima
    /// `σ_n = max_{m ≥ n} (Σ_{j=n}^m a_{m,j}²)^{1/2}`, so that a greedy run on
    /// the rows reproduces the matrix.
    ///
    /// Target envelope `s_n = scale · decay^n`; diagonals are drawn in
    /// `[γ s_n, s_n]` and off-diagonal entries fill a random share of the
    /// remaining tail budget.
    pub fn synthetic_from_matrix(
        size: usize,
        gamma: f64,
        decay: f64,
        scale: f64,
        seed: u64,
    ) -> CompactSetSpec {
        let mut rng = rng::stream(seed, "sets/from_matrix");
        let s: Vec<f64> = (0..size).map(|n| scale * decay.powi(n as i32)).collect();
        let mut a = vec![vec![0.0; size]; size];
        for m in 0..size {
            let d = s[m] * rng.random_range(gamma..=1.0);
            a[m][m] = d;
            let mut used = d * d;
            for j in (0..m).rev() {
                let budget = (s[j] * s[j] - used).max(0.0);
                let v = budget * rng.random_range(0.0..1.0);
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                a[m][j] = sign * v.sqrt();
                used += v;
            }
        }
        let sigmas = tail_maxima(&a);
        CompactSetSpec::FromMatrix { a, sigmas, gamma }
    }
}

/// `σ_n = max_{m ≥ n} ‖(a_{m,n}, …, a_{m,m})‖_2` for `n = 0..=M` (with `σ_M = 0`).
pub fn tail_maxima(a: &[Vec<f64>]) -> Vec<f64> {
    let m = a.len();
    let mut sig = vec![0.0; m + 1];
    for (n, s) in sig.iter_mut().enumerate().take(m) {
        *s = (n..m)
            .map(|r| a[r][n..=r].iter().map(|x| x * x).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
    }
    sig
}

fn diagonal_elements(x: &[f64]) -> Vec<DenseVector> {
    let d = x.len();
    x.iter()
        .enumerate()
        .map(|(j, v)| DenseVector::unit(d, j).scaled(*v))
        .collect()
}

fn random_ball(dim: usize, count: usize, seed: u64, kind: NormKind) -> Result<Vec<DenseVector>> {
    let mut rng = rng::stream(seed, "sets/random_ball");
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let coords: Vec<f64> = match kind {
            NormKind::LInf => (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect(),
            NormKind::Hilbert => {
                let g: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
                let z: f64 = rng.sample(Exp1);
                let s = (g.iter().map(|x| x * x).sum::<f64>() + 2.0 * z).sqrt();
                g.iter().map(|x| x / s).collect()
            }
            _ => {
                // Uniform in the ℓ_p ball: generalized-Gaussian coordinates
                // (|g|^p ~ Gamma(1/p)) normalized by (Σ|g|^p + Exp(1))^{1/p}.
                let p = kind.exponent();
                let gamma = Gamma::new(1.0 / p, 1.0).expect("valid shape");
                let mags: Vec<f64> = (0..dim).map(|_| gamma.sample(&mut rng)).collect();
                let z: f64 = rng.sample(Exp1);
                let s = (mags.iter().sum::<f64>() + z).powf(1.0 / p);
                mags.iter()
                    .map(|t| {
                        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                        sign * t.powf(1.0 / p) / s
                    })
                    .collect()
            }
        };
        out.push(DenseVector::new(coords)?);
    }
    Ok(out)
}

fn parametric(
    dim: usize,
    count: usize,
    (lo, hi): (f64, f64),
    kind: NormKind,
) -> Result<Vec<DenseVector>> {
    let raw: Vec<DenseVector> = (0..count)
        .map(|k| {
            let mu = if count == 1 {
                lo
            } else {
                lo + (hi - lo) * k as f64 / (count - 1) as f64
            };
            DenseVector::new((0..dim).map(|i| mu.powi(i as i32)).collect())
        })
        .collect::<Result<_>>()?;
    let normalizer = raw.iter().map(|v| norm(v, kind)).fold(0.0, f64::max);
    Ok(raw.iter().map(|v| v.scaled(1.0 / normalizer)).collect())
}

pub fn realize(spec: &CompactSetSpec, norm_kind: NormKind) -> Result<CompactSet> {
    let norm_kind = norm_kind.validate()?;
    spec.validate()?;
    let elements = match spec {
        CompactSetSpec::Diagonal { x } => diagonal_elements(x),
        CompactSetSpec::DyadicBlocks { alpha, levels } => {
            diagonal_elements(&CompactSetSpec::dyadic_values(*alpha, *levels))
        }
        CompactSetSpec::FromMatrix { a, .. } => a
            .iter()
            .map(|row| DenseVector::new(row.clone()))
            .collect::<Result<_>>()?,
        CompactSetSpec::RandomBall { dim, count, seed } => {
            random_ball(*dim, *count, *seed, norm_kind)?
        }
        CompactSetSpec::ParametricSurrogate {
            dim,
            count,
            mu_range,
        } => parametric(*dim, *count, *mu_range, norm_kind)?,
    };
    let set = CompactSet {
        elements,
        norm_kind,
        spec: spec.clone(),
    };
    set.check_unit_ball()?;
    Ok(set)
}

/// Widths that can be read off the set's structure.
///
/// For diagonal sets the coordinate space `span{e_0, …, e_{n−1}}` leaves
/// worst error `x_n` in every `ℓ_p`, so `d_n ≤ x_n`; `d_0 = x_0` and
/// `d_n = 0` once `n` reaches the number of elements. Other kinds: `None`.
pub fn known_widths(spec: &CompactSetSpec, n_max: usize) -> Option<WidthSequence> {
    let x = spec.diagonal_values()?;
    let mut seq = WidthSequence::default();
    for n in 0..=n_max {
        match x.get(n) {
            Some(v) if n == 0 => seq.push(n, *v, WidthTag::Exact, "analytic"),
            Some(v) => seq.push(n, *v, WidthTag::Upper, "analytic"),
            None => seq.push(n, 0.0, WidthTag::Exact, "analytic"),
        }
    }
    Some(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqspace::inner;

    #[test]
    fn diagonal_realization() {
        let spec = CompactSetSpec::Diagonal {
            x: vec![1.0, 0.5, 0.25],
        };
        let set = realize(&spec, NormKind::Hilbert).unwrap();
        assert_eq!(set.elements[0], DenseVector::unit(3, 0));
        assert_eq!(set.elements[1], DenseVector::unit(3, 1).scaled(0.5));
        assert_eq!(set.elements[2], DenseVector::unit(3, 2).scaled(0.25));
        for i in 0..3 {
            for j in 0..i {
                assert_eq!(inner(&set.elements[i], &set.elements[j]).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn dyadic_block_values() {
        assert_eq!(
            CompactSetSpec::dyadic_values(1.0, 3),
            vec![1.0, 0.5, 0.25, 0.25, 0.125, 0.125, 0.125, 0.125]
        );
        let spec = CompactSetSpec::DyadicBlocks {
            alpha: 0.4,
            levels: 3,
        };
        assert!(realize(&spec, NormKind::LInf).is_err());
    }

    #[test]
    fn from_matrix_requires_sigmas_to_vanish() {
        let id = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        let spec = CompactSetSpec::FromMatrix {
            a: id.clone(),
            sigmas: vec![1.0, 1.0, 1.0],
            gamma: 1.0,
        };
        assert!(matches!(realize(&spec, NormKind::Hilbert), Err(Error::InvalidSet(_))));
        let spec = CompactSetSpec::FromMatrix {
            a: id,
            sigmas: vec![1.0, 1.0, 1.0, 1.0],
            gamma: 1.0,
        };
        assert!(matches!(realize(&spec, NormKind::Hilbert), Err(Error::InvalidSet(_))));
    }

    #[test]
    fn from_matrix_rejects_p1_and_p2_violations() {
        // |a_11| = 0.1 < γσ_1 = 0.5
        let spec = CompactSetSpec::FromMatrix {
            a: vec![vec![1.0, 0.0], vec![0.0, 0.1]],
            sigmas: vec![1.0, 0.5, 0.0],
            gamma: 1.0,
        };
        assert!(realize(&spec, NormKind::Hilbert).is_err());
        // tail of row 1 from column 1 is 0.5 but row 1 has a_10 making Σ_{j≥0} fine;
        // σ_1 = 0.4 < |a_11| violates the P1 upper bound.
        let spec = CompactSetSpec::FromMatrix {
            a: vec![vec![1.0, 0.0], vec![0.6, 0.5]],
            sigmas: vec![1.0, 0.4, 0.0],
            gamma: 0.5,
        };
        assert!(realize(&spec, NormKind::Hilbert).is_err());
        // P2 fails: row 1 energy 0.9² + 0.3² > σ_0² = 0.8
        let spec = CompactSetSpec::FromMatrix {
            a: vec![vec![0.9, 0.0], vec![0.9, 0.3]],
            sigmas: vec![0.9, 0.3, 0.0],
            gamma: 1.0,
        };
        assert!(realize(&spec, NormKind::Hilbert).is_err());
    }

    #[test]
    fn synthetic_matrices_are_valid() {
        for (gamma, seed) in [(1.0, 1), (0.7, 2), (0.5, 3)] {
            let spec = CompactSetSpec::synthetic_from_matrix(8, gamma, 0.7, 1.0, seed);
            realize(&spec, NormKind::Hilbert).unwrap();
        }
    }

    #[test]
    fn random_ball_stays_in_ball_and_is_seeded() {
        for kind in [
            NormKind::Hilbert,
            NormKind::L1,
            NormKind::LInf,
            NormKind::Lp(3.0),
        ] {
            let spec = CompactSetSpec::RandomBall {
                dim: 6,
                count: 50,
                seed: 11,
            };
            let a = realize(&spec, kind).unwrap();
            let b = realize(&spec, kind).unwrap();
            assert_eq!(a.elements, b.elements);
            assert!(a.max_norm() <= 1.0);
        }
    }

    #[test]
    fn parametric_surrogate_is_normalized() {
        let spec = CompactSetSpec::ParametricSurrogate {
            dim: 5,
            count: 9,
            mu_range: (-1.0, 2.0),
        };
        let set = realize(&spec, NormKind::L1).unwrap();
        assert!((set.max_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn known_widths_for_diagonal() {
        let spec = CompactSetSpec::Diagonal {
            x: vec![1.0, 0.5, 0.25],
        };
        let w = known_widths(&spec, 4).unwrap();
        assert_eq!(w.upper(0), Some(1.0));
        assert_eq!(w.exact(0), Some(1.0));
        assert_eq!(w.upper(1), Some(0.5));
        assert_eq!(w.exact(3), Some(0.0));
        assert!(known_widths(
            &CompactSetSpec::RandomBall {
                dim: 2,
                count: 2,
                seed: 0
            },
            3
        )
        .is_none());
    }

    #[test]
    fn dyadic_known_widths_at_powers_of_two() {
        let spec = CompactSetSpec::DyadicBlocks {
            alpha: 1.0,
            levels: 6,
        };
        let w = known_widths(&spec, 63).unwrap();
        for k in 0..6 {
            let n = 1usize << k;
            assert_eq!(w.upper(n), Some(2f64.powi(-(k + 1))));
        }
    }
}
