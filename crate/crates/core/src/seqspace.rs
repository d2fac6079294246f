//! Finite sequence spaces: dense vectors, `ℓ_p` norms and norming functionals.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for dual-norm and norming identities.
pub const TAU_DUAL: f64 = 1e-10;

/// A dense real vector in `R^dim`. All coordinates are finite.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DenseVector {
    coords: Vec<f64>,
}

impl DenseVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some(i) = coords.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { coords })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            coords: vec![0.0; dim],
        }
    }

    /// Coordinate vector `e_j` in `R^dim`.
    pub fn unit(dim: usize, j: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.coords[j] = 1.0;
        v
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0.0)
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            coords: self.coords.iter().map(|x| alpha * x).collect(),
        }
    }

    /// `self += alpha * other`
    pub fn axpy(&mut self, alpha: f64, other: &DenseVector) {
        debug_assert_eq!(self.dim(), other.dim());
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a += alpha * b;
        }
    }

    pub fn sub(&self, other: &DenseVector) -> Result<Self> {
        check_dims(self, other)?;
        Ok(Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn add(&self, other: &DenseVector) -> Result<Self> {
        check_dims(self, other)?;
        Ok(Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.coords.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl Index<usize> for DenseVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

impl fmt::Debug for DenseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coords).finish()
    }
}

impl TryFrom<Vec<f64>> for DenseVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<DenseVector> for Vec<f64> {
    fn from(v: DenseVector) -> Self {
        v.coords
    }
}

fn check_dims(u: &DenseVector, v: &DenseVector) -> Result<()> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    Ok(())
}

/// The norm carried by the ambient sequence space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NormKind {
    /// `ℓ_2` with its inner product.
    Hilbert,
    /// `ℓ_p` for `1 < p < ∞`.
    Lp(f64),
    L1,
    LInf,
}

impl NormKind {
    pub fn lp(p: f64) -> Result<Self> {
        if p.is_finite() && p > 1.0 {
            Ok(NormKind::Lp(p))
        } else {
            Err(Error::InvalidExponent(p))
        }
    }

    pub fn validate(self) -> Result<Self> {
        match self {
            NormKind::Lp(p) => Self::lp(p),
            k => Ok(k),
        }
    }

    /// Exponent `p` of the norm (`∞` for [`NormKind::LInf`]).
    pub fn exponent(self) -> f64 {
        match self {
            NormKind::Hilbert => 2.0,
            NormKind::Lp(p) => p,
            NormKind::L1 => 1.0,
            NormKind::LInf => f64::INFINITY,
        }
    }

    /// Norm of the dual sequence space.
    pub fn dual(self) -> NormKind {
        match self {
            NormKind::Hilbert => NormKind::Hilbert,
            NormKind::Lp(p) => NormKind::Lp(p / (p - 1.0)),
            NormKind::L1 => NormKind::LInf,
            NormKind::LInf => NormKind::L1,
        }
    }

    /// Whether the norm is differentiable away from zero (norming functionals are unique).
    pub fn is_smooth(self) -> bool {
        matches!(self, NormKind::Hilbert | NormKind::Lp(_))
    }

    /// Largest ratio `‖v‖ / ‖v‖_2` over `R^dim`.
    pub(crate) fn max_ratio_to_l2(self, dim: usize) -> f64 {
        let t = 1.0 / self.exponent() - 0.5;
        (dim as f64).powf(t.max(0.0))
    }

    /// Smallest ratio `‖v‖ / ‖v‖_2` over `R^dim`.
    pub(crate) fn min_ratio_to_l2(self, dim: usize) -> f64 {
        let t = 1.0 / self.exponent() - 0.5;
        (dim as f64).powf(t.min(0.0))
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormKind::Hilbert => write!(f, "l2"),
            NormKind::Lp(p) => write!(f, "l{p}"),
            NormKind::L1 => write!(f, "l1"),
            NormKind::LInf => write!(f, "linf"),
        }
    }
}

pub fn norm(v: &DenseVector, kind: NormKind) -> f64 {
    norm_slice(v.as_slice(), kind)
}

pub(crate) fn norm_slice(v: &[f64], kind: NormKind) -> f64 {
    match kind {
        NormKind::LInf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        NormKind::L1 => v.iter().map(|x| x.abs()).sum(),
        NormKind::Hilbert => lp_norm_scaled(v, 2.0),
        NormKind::Lp(p) => lp_norm_scaled(v, p),
    }
}

// Scale by the max modulus so large exponents cannot overflow.
fn lp_norm_scaled(v: &[f64], p: f64) -> f64 {
    let m = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if m == 0.0 {
        return 0.0;
    }
    let s: f64 = if p == 2.0 {
        v.iter().map(|x| (x / m) * (x / m)).sum()
    } else {
        v.iter().map(|x| (x.abs() / m).powf(p)).sum()
    };
    m * s.powf(1.0 / p)
}

/// Euclidean inner product.
pub fn inner(u: &DenseVector, v: &DenseVector) -> Result<f64> {
    check_dims(u, v)?;
    Ok(dot(u.as_slice(), v.as_slice()))
}

#[inline]
pub(crate) fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

#[inline]
fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// A continuous linear functional on the sequence space, represented by its
/// coefficient vector in the dual space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Functional {
    pub coeffs: DenseVector,
    pub norm_kind_dual: NormKind,
}

impl Functional {
    pub fn apply(&self, v: &DenseVector) -> Result<f64> {
        inner(&self.coeffs, v)
    }

    pub fn dual_norm(&self) -> f64 {
        norm(&self.coeffs, self.norm_kind_dual)
    }
}

/// Norm-one functional `λ` with `λ(r) = ‖r‖`.
///
/// `ℓ_∞` picks the first coordinate of maximal modulus; `ℓ_1` uses `sign(0) = 0`.
pub fn norming_functional(r: &DenseVector, kind: NormKind) -> Result<Functional> {
    let kind = kind.validate()?;
    if r.is_zero() {
        return Err(Error::ZeroVector);
    }
    let x = r.as_slice();
    let coeffs = match kind {
        NormKind::Hilbert => {
            let n = norm(r, kind);
            x.iter().map(|v| v / n).collect()
        }
        NormKind::Lp(p) => {
            let n = norm(r, kind);
            x.iter()
                .map(|v| sign(*v) * (v.abs() / n).powf(p - 1.0))
                .collect()
        }
        NormKind::L1 => x.iter().map(|v| sign(*v)).collect(),
        NormKind::LInf => {
            let m = r.max_abs();
            // first index attaining the max modulus
            let i = x.iter().position(|v| v.abs() == m).expect("nonzero vector");
            let mut c = vec![0.0; x.len()];
            c[i] = sign(x[i]);
            c
        }
    };
    Ok(Functional {
        coeffs: DenseVector::new(coeffs)?,
        norm_kind_dual: kind.dual(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn v(x: &[f64]) -> DenseVector {
        DenseVector::new(x.to_vec()).unwrap()
    }

    #[test]
    fn rejects_non_finite() {
        assert_eq!(
            DenseVector::new(vec![1.0, f64::NAN]),
            Err(Error::NonFinite(1))
        );
        assert!(NormKind::lp(1.0).is_err());
        assert!(NormKind::lp(f64::INFINITY).is_err());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&v(&[1.0, 0.0, 0.0]), NormKind::LInf), 1.0);
        assert_eq!(norm(&v(&[3.0, 4.0]), NormKind::Hilbert), 5.0);
        assert_abs_diff_eq!(
            norm(&v(&[1.0, 1.0]), NormKind::Lp(3.0)),
            2f64.powf(1.0 / 3.0),
            epsilon = 1e-15
        );
        assert_eq!(norm(&v(&[1.0, -2.0]), NormKind::L1), 3.0);
        assert_eq!(norm(&DenseVector::zeros(3), NormKind::Lp(1.5)), 0.0);
    }

    #[test]
    fn inner_examples() {
        let e0 = DenseVector::unit(2, 0);
        let e1 = DenseVector::unit(2, 1);
        assert_eq!(inner(&e0, &e1).unwrap(), 0.0);
        assert_eq!(inner(&e0, &e0).unwrap(), 1.0);
        assert_eq!(inner(&v(&[1.0, 2.0]), &v(&[3.0, 4.0])).unwrap(), 11.0);
        assert!(matches!(
            inner(&e0, &DenseVector::unit(3, 0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn norming_examples() {
        let l = norming_functional(&v(&[0.0, 2.0]), NormKind::Hilbert).unwrap();
        assert_eq!(l.coeffs, v(&[0.0, 1.0]));

        let l = norming_functional(&v(&[0.5, -2.0, 1.0]), NormKind::LInf).unwrap();
        assert_eq!(l.coeffs, v(&[0.0, -1.0, 0.0]));
        assert_eq!(l.norm_kind_dual, NormKind::L1);

        let r = v(&[1.0, 1.0]);
        let l = norming_functional(&r, NormKind::Lp(3.0)).unwrap();
        let c = 2f64.powf(-2.0 / 3.0);
        assert_abs_diff_eq!(l.coeffs[0], c, epsilon = 1e-15);
        assert_abs_diff_eq!(l.coeffs[1], c, epsilon = 1e-15);
        assert_abs_diff_eq!(l.apply(&r).unwrap(), 2f64.powf(1.0 / 3.0), epsilon = 1e-14);
        assert_abs_diff_eq!(l.dual_norm(), 1.0, epsilon = 1e-14);

        let l = norming_functional(&v(&[0.0, -3.0, 2.0]), NormKind::L1).unwrap();
        assert_eq!(l.coeffs, v(&[0.0, -1.0, 1.0]));
    }

    #[test]
    fn linf_ties_pick_smallest_index() {
        let l = norming_functional(&v(&[1.0, -2.0, 2.0]), NormKind::LInf).unwrap();
        assert_eq!(l.coeffs, v(&[0.0, -1.0, 0.0]));
    }

    #[test]
    fn zero_vector_has_no_norming_functional() {
        assert_eq!(
            norming_functional(&DenseVector::zeros(2), NormKind::L1),
            Err(Error::ZeroVector)
        );
    }

    fn kinds() -> impl Strategy<Value = NormKind> {
        prop_oneof![
            Just(NormKind::Hilbert),
            Just(NormKind::L1),
            Just(NormKind::LInf),
            (1.05f64..8.0).prop_map(NormKind::Lp),
        ]
    }

    fn vecs(dim: usize) -> impl Strategy<Value = DenseVector> {
        prop::collection::vec(-10.0f64..10.0, dim).prop_map(|x| DenseVector::new(x).unwrap())
    }

    fn triple() -> impl Strategy<Value = (DenseVector, DenseVector, DenseVector)> {
        (1usize..9).prop_flat_map(|d| (vecs(d), vecs(d), vecs(d)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn norm_axioms(k in kinds(), (u, w, _) in triple(), alpha in -5.0f64..5.0) {
            let nu = norm(&u, k);
            prop_assert_eq!(nu == 0.0, u.is_zero());
            let scaled = norm(&u.scaled(alpha), k);
            prop_assert!((scaled - alpha.abs() * nu).abs() <= 1e-12 * (1.0 + scaled));
            let sum = norm(&u.add(&w).unwrap(), k);
            prop_assert!(sum <= (nu + norm(&w, k)) * (1.0 + 1e-12));
        }

        #[test]
        fn norming_identities(k in kinds(), (r, x, _) in triple()) {
            prop_assume!(!r.is_zero());
            let l = norming_functional(&r, k).unwrap();
            let nr = norm(&r, k);
            prop_assert!((l.apply(&r).unwrap() - nr).abs() <= TAU_DUAL * nr);
            prop_assert!((l.dual_norm() - 1.0).abs() <= TAU_DUAL);
            // Hölder: |λ(x)| ≤ ‖λ‖_* ‖x‖
            prop_assert!(l.apply(&x).unwrap().abs() <= norm(&x, k) * (1.0 + TAU_DUAL) + 1e-12);
        }
    }
}
