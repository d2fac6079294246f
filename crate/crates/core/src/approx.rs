//! Best approximation from finite-dimensional subspaces.
//!
//! Every solver returns an [`ApproxResult`] whose coefficients refer to the
//! subspace's spanning set, so that `f − Σ c_i b_i` reproduces the residual.
//!
//! The `ℓ_∞` and `ℓ_1` solvers work on the dual program
//! `max { λ(f) : λ(V) = 0, ‖λ‖_* ≤ 1 }` and recover the primal coefficients
//! from the simplex multipliers; the optimal `λ` is returned as a certificate.
//! Both distances are then evaluated on the primal residual, which is feasible
//! by construction.

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Relation, DEFAULT_MAX_ITER};
use crate::seqspace::{dot, norm, norm_slice, norming_functional, DenseVector, Functional, NormKind};

/// Relative residual below which a new direction counts as linearly dependent.
pub const TAU_RANK: f64 = 1e-10;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// `span` of a list of vectors, with an orthonormal basis built by Gram–Schmidt.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<DenseVector>,
    ortho: Option<Vec<DenseVector>>,
    // ortho[j] = Σ_i to_basis[j][i] · basis[i]
    to_basis: Vec<Vec<f64>>,
    // basis indices that contributed an orthonormal direction
    pivots: Vec<usize>,
}

/// Outcome of one Gram–Schmidt extension step.
#[derive(Debug, Clone, PartialEq)]
pub struct GsStep {
    /// `⟨f, q_j⟩` for every existing orthonormal vector `q_j`.
    pub coeffs: Vec<f64>,
    /// Normalized residual, or `None` when `f` is dependent.
    pub new_vector: Option<DenseVector>,
    pub residual_norm: f64,
}

/// Extends an orthonormal list by `f`, orthogonalizing twice.
pub fn gram_schmidt_extend(ortho: &[DenseVector], f: &DenseVector) -> GsStep {
    let mut r = f.clone();
    let mut coeffs = vec![0.0; ortho.len()];
    for _ in 0..2 {
        for (c, q) in coeffs.iter_mut().zip(ortho) {
            let a = dot(r.as_slice(), q.as_slice());
            *c += a;
            r.axpy(-a, q);
        }
    }
    let rn = norm(&r, NormKind::Hilbert);
    let fnorm = norm(f, NormKind::Hilbert);
    let new_vector = (rn > TAU_RANK * fnorm && rn > 0.0).then(|| r.scaled(1.0 / rn));
    GsStep {
        coeffs,
        new_vector,
        residual_norm: rn,
    }
}

impl Subspace {
    pub fn empty(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
            ortho: Some(Vec::new()),
            to_basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn new(ambient_dim: usize, basis: Vec<DenseVector>) -> Result<Self> {
        let mut s = Self::empty(ambient_dim);
        for b in basis {
            s.push(b)?;
        }
        Ok(s)
    }

    /// Appends a spanning vector and returns its Gram–Schmidt step.
    pub fn push(&mut self, v: DenseVector) -> Result<GsStep> {
        if v.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                left: self.ambient_dim,
                right: v.dim(),
            });
        }
        let ortho = self.ortho.as_mut().ok_or(Error::MissingOrthonormalBasis)?;
        let step = gram_schmidt_extend(ortho, &v);
        let k = self.basis.len();
        for t in &mut self.to_basis {
            t.push(0.0);
        }
        if let Some(q) = &step.new_vector {
            // q = (v − Σ c_j q_j) / ‖r‖
            let mut t = vec![0.0; k + 1];
            t[k] = 1.0;
            for (c, tj) in step.coeffs.iter().zip(&self.to_basis) {
                for (ti, x) in t.iter_mut().zip(tj) {
                    *ti -= c * x;
                }
            }
            for ti in &mut t {
                *ti /= step.residual_norm;
            }
            ortho.push(q.clone());
            self.to_basis.push(t);
            self.pivots.push(k);
        }
        self.basis.push(v);
        Ok(step)
    }

    /// Drops the orthonormal basis; Hilbert distances then become unavailable.
    pub fn forget_orthonormal(mut self) -> Self {
        self.ortho = None;
        self
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[DenseVector] {
        &self.basis
    }

    pub fn ortho(&self) -> Option<&[DenseVector]> {
        self.ortho.as_deref()
    }

    /// Rank of the spanning set.
    pub fn dim_span(&self) -> usize {
        self.pivots.len()
    }

    /// Indices of spanning vectors that are linearly independent of their predecessors.
    pub fn independent_indices(&self) -> &[usize] {
        &self.pivots
    }

    /// Largest deviation of the orthonormal basis from the identity Gram matrix.
    pub fn orthonormality_defect(&self) -> f64 {
        let Some(q) = &self.ortho else {
            return f64::INFINITY;
        };
        let mut worst = 0.0f64;
        for i in 0..q.len() {
            for j in 0..=i {
                let g = dot(q[i].as_slice(), q[j].as_slice());
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).abs());
            }
        }
        worst
    }

    fn coeffs_from_ortho(&self, z: &[f64]) -> Vec<f64> {
        let mut c = vec![0.0; self.basis.len()];
        for (zj, t) in z.iter().zip(&self.to_basis) {
            for (ci, ti) in c.iter_mut().zip(t) {
                *ci += zj * ti;
            }
        }
        c
    }

    /// `f − Σ c_i b_i`
    pub fn residual(&self, f: &DenseVector, coeffs: &[f64]) -> DenseVector {
        let mut r = f.clone();
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if *c != 0.0 {
                r.axpy(-c, b);
            }
        }
        r
    }
}

/// Distance from `f` to a subspace together with a best approximation.
#[derive(Debug, Clone)]
pub struct ApproxResult {
    pub distance: f64,
    /// Coefficients with respect to [`Subspace::basis`].
    pub best_coeffs: Vec<f64>,
    pub residual: DenseVector,
    /// A norm-one functional vanishing on the subspace and attaining the
    /// distance at `f`, when the solver produced one.
    pub functional: Option<Functional>,
    /// Primal value minus certified dual value (0 for closed-form solvers).
    pub gap: f64,
}

impl ApproxResult {
    fn trivial(f: &DenseVector, v: &Subspace, kind: NormKind) -> Result<Self> {
        let distance = norm(f, kind);
        Ok(Self {
            distance,
            best_coeffs: vec![0.0; v.basis.len()],
            residual: f.clone(),
            functional: if f.is_zero() {
                None
            } else {
                Some(norming_functional(f, kind)?)
            },
            gap: 0.0,
        })
    }
}

fn check_dim(f: &DenseVector, v: &Subspace) -> Result<()> {
    if f.dim() != v.ambient_dim {
        return Err(Error::DimensionMismatch {
            left: v.ambient_dim,
            right: f.dim(),
        });
    }
    Ok(())
}

/// Orthogonal projection distance in `ℓ_2`.
pub fn dist_hilbert(f: &DenseVector, v: &Subspace) -> Result<ApproxResult> {
    check_dim(f, v)?;
    let ortho = v.ortho.as_ref().ok_or(Error::MissingOrthonormalBasis)?;
    let step = gram_schmidt_extend(ortho, f);
    let best_coeffs = v.coeffs_from_ortho(&step.coeffs);
    let mut residual = f.clone();
    for (c, q) in step.coeffs.iter().zip(ortho) {
        residual.axpy(-c, q);
    }
    let distance = norm(&residual, NormKind::Hilbert);
    let functional = if distance > 0.0 {
        Some(norming_functional(&residual, NormKind::Hilbert)?)
    } else {
        None
    };
    Ok(ApproxResult {
        distance,
        best_coeffs,
        residual,
        functional,
        gap: 0.0,
    })
}

/// Coordinates and spanning vectors that can interact with `f`.
///
/// Spanning vectors whose supports are not connected (through shared
/// coordinates) to the support of `f` are orthogonal-by-support and can be
/// given coefficient zero in every `ℓ_p` norm.
struct Reduction {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

fn reduce(f: &DenseVector, basis: &[DenseVector], candidates: &[usize]) -> Reduction {
    let d = f.dim();
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut first_support = vec![None; candidates.len()];
    for (slot, &bi) in candidates.iter().enumerate() {
        let mut anchor = None;
        for (i, &x) in basis[bi].as_slice().iter().enumerate() {
            if x != 0.0 {
                match anchor {
                    None => anchor = Some(i),
                    Some(a) => {
                        let (ra, rb) = (find(&mut parent, a), find(&mut parent, i));
                        if ra != rb {
                            parent[rb] = ra;
                        }
                    }
                }
            }
        }
        first_support[slot] = anchor;
    }
    let mut live = vec![false; d];
    for (i, &x) in f.as_slice().iter().enumerate() {
        if x != 0.0 {
            let r = find(&mut parent, i);
            live[r] = true;
        }
    }
    let mut cols = Vec::new();
    let mut touched = vec![false; d];
    for (slot, &bi) in candidates.iter().enumerate() {
        if let Some(a) = first_support[slot] {
            if live[find(&mut parent, a)] {
                cols.push(bi);
                for (i, &x) in basis[bi].as_slice().iter().enumerate() {
                    if x != 0.0 {
                        touched[i] = true;
                    }
                }
            }
        }
    }
    let rows = (0..d)
        .filter(|&i| touched[i] || f[i] != 0.0)
        .collect();
    Reduction { rows, cols }
}

fn restricted(v: &DenseVector, rows: &[usize]) -> Vec<f64> {
    rows.iter().map(|&i| v[i]).collect()
}

fn embed(local: &[f64], rows: &[usize], dim: usize) -> DenseVector {
    let mut out = vec![0.0; dim];
    for (&i, &x) in rows.iter().zip(local) {
        out[i] = x;
    }
    DenseVector::new(out).expect("finite")
}

/// Chebyshev (`ℓ_∞`) best approximation via linear programming.
pub fn dist_linf(f: &DenseVector, v: &Subspace, tol: f64) -> Result<ApproxResult> {
    dist_polyhedral(f, v, NormKind::LInf, tol, DEFAULT_MAX_ITER)
}

/// Least-absolute-deviation (`ℓ_1`) best approximation via linear programming.
pub fn dist_l1(f: &DenseVector, v: &Subspace, tol: f64) -> Result<ApproxResult> {
    dist_polyhedral(f, v, NormKind::L1, tol, DEFAULT_MAX_ITER)
}

fn dist_polyhedral(
    f: &DenseVector,
    v: &Subspace,
    kind: NormKind,
    tol: f64,
    max_iter: usize,
) -> Result<ApproxResult> {
    check_dim(f, v)?;
    if f.is_zero() {
        return ApproxResult::trivial(f, v, kind);
    }
    let red = reduce(f, &v.basis, &v.pivots);
    if red.cols.is_empty() {
        return ApproxResult::trivial(f, v, kind);
    }
    let r = red.rows.len();
    let k = red.cols.len();
    let fr = restricted(f, &red.rows);
    let br: Vec<Vec<f64>> = red
        .cols
        .iter()
        .map(|&j| restricted(&v.basis[j], &red.rows))
        .collect();

    // Dual programs, posed as minimizations:
    //   ℓ_∞: y = u − w,  min −f·(u − w)  s.t. Bᵀ(u − w) = 0, Σ(u + w) ≤ 1
    //   ℓ_1: y = z − 1,  min −f·z        s.t. Bᵀz = Bᵀ1,     z ≤ 2
    // In both the multipliers of the Bᵀ rows are −c.
    let y_local: Vec<f64>;
    let multipliers: Vec<f64>;
    match kind {
        NormKind::LInf => {
            let mut obj = Vec::with_capacity(2 * r);
            obj.extend(fr.iter().map(|x| -x));
            obj.extend(fr.iter().copied());
            let mut lp = LinearProgram::new(obj);
            for b in &br {
                let mut row = Vec::with_capacity(2 * r);
                row.extend(b.iter().copied());
                row.extend(b.iter().map(|x| -x));
                lp.push(row, Relation::Eq, 0.0);
            }
            lp.push(vec![1.0; 2 * r], Relation::Le, 1.0);
            let sol = lp.solve(max_iter)?;
            y_local = (0..r).map(|i| sol.x[i] - sol.x[r + i]).collect();
            multipliers = sol.duals[..k].to_vec();
        }
        NormKind::L1 => {
            let obj: Vec<f64> = fr.iter().map(|x| -x).collect();
            let mut lp = LinearProgram::new(obj);
            for b in &br {
                lp.push(b.clone(), Relation::Eq, b.iter().sum());
            }
            for i in 0..r {
                let mut row = vec![0.0; r];
                row[i] = 1.0;
                lp.push(row, Relation::Le, 2.0);
            }
            let sol = lp.solve(max_iter)?;
            y_local = sol.x.iter().map(|z| z - 1.0).collect();
            multipliers = sol.duals[..k].to_vec();
        }
        _ => unreachable!("polyhedral solver called with {kind}"),
    }

    let mut best_coeffs = vec![0.0; v.basis.len()];
    for (&j, pi) in red.cols.iter().zip(&multipliers) {
        best_coeffs[j] = -pi;
    }
    let residual = v.residual(f, &best_coeffs);
    let distance = norm(&residual, kind);
    let dual_value = dot(&fr, &y_local);
    let gap = distance - dual_value;
    let scale = norm(f, kind).max(f64::MIN_POSITIVE);
    if gap > tol * scale.max(1.0) || gap < -tol * scale.max(1.0) {
        return Err(Error::CertificateGap {
            norm: kind.to_string(),
            gap,
            tol,
        });
    }

    let dual_kind = kind.dual();
    let y_norm = norm_slice(&y_local, dual_kind);
    let functional = (dual_value > 0.0 && y_norm > 0.0).then(|| Functional {
        coeffs: embed(
            &y_local.iter().map(|y| y / y_norm).collect::<Vec<_>>(),
            &red.rows,
            f.dim(),
        ),
        norm_kind_dual: dual_kind,
    });
    Ok(ApproxResult {
        distance,
        best_coeffs,
        residual,
        functional,
        gap,
    })
}

/// `ℓ_p` best approximation (`1 < p < ∞`) by damped Newton descent.
///
/// Stops once the norming functional of the residual annihilates the
/// subspace to within `tol`, which is the first-order optimality condition.
pub fn dist_lp(f: &DenseVector, v: &Subspace, p: f64, tol: f64) -> Result<ApproxResult> {
    dist_lp_with(f, v, p, tol, DEFAULT_MAX_ITER)
}

fn dist_lp_with(
    f: &DenseVector,
    v: &Subspace,
    p: f64,
    tol: f64,
    max_iter: usize,
) -> Result<ApproxResult> {
    check_dim(f, v)?;
    let kind = NormKind::lp(p)?;
    if f.is_zero() {
        return ApproxResult::trivial(f, v, kind);
    }
    let red = reduce(f, &v.basis, &v.pivots);
    if red.cols.is_empty() {
        return ApproxResult::trivial(f, v, kind);
    }
    let rows = &red.rows;
    let local = Subspace::new(
        rows.len(),
        red.cols
            .iter()
            .map(|&j| DenseVector::new(restricted(&v.basis[j], rows)))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let q = local.ortho().expect("fresh subspace");
    let kq = q.len();

    let scale = norm_slice(&restricted(f, rows), kind);
    let fs: Vec<f64> = restricted(f, rows).iter().map(|x| x / scale).collect();

    // start at the ℓ_2 minimizer
    let mut z: Vec<f64> = q.iter().map(|qj| dot(&fs, qj.as_slice())).collect();
    let residual_of = |z: &[f64]| -> Vec<f64> {
        let mut r = fs.clone();
        for (zj, qj) in z.iter().zip(q) {
            for (ri, qi) in r.iter_mut().zip(qj.as_slice()) {
                *ri -= zj * qi;
            }
        }
        r
    };
    let objective = |r: &[f64]| -> f64 { r.iter().map(|x| x.abs().powf(p)).sum::<f64>() / p };

    let mut converged = false;
    for _ in 0..max_iter {
        let r = residual_of(&z);
        let rnorm = norm_slice(&r, kind);
        if rnorm <= 1e-14 {
            converged = true;
            break;
        }
        // g = |r|^{p-1} sign(r); ∇φ = −Qᵀg
        let g: Vec<f64> = r.iter().map(|x| x.signum() * x.abs().powf(p - 1.0)).collect();
        let qtg: Vec<f64> = q.iter().map(|qj| dot(qj.as_slice(), &g)).collect();
        let gscale = rnorm.powf(p - 1.0);
        let stationarity = qtg.iter().map(|x| x * x).sum::<f64>().sqrt() / gscale;
        if stationarity <= tol {
            converged = true;
            break;
        }

        let floor = 1e-8 * r.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let w: Vec<f64> = r
            .iter()
            .map(|x| (p - 1.0) * x.abs().max(floor).powf(p - 2.0))
            .collect();
        let mut h = nalgebra::DMatrix::<f64>::zeros(kq, kq);
        for a in 0..kq {
            for b in 0..=a {
                let s: f64 = (0..r.len())
                    .map(|i| w[i] * q[a][i] * q[b][i])
                    .sum();
                h[(a, b)] = s;
                h[(b, a)] = s;
            }
        }
        let mu = 1e-12 * (h.trace() / kq as f64).max(f64::MIN_POSITIVE);
        for a in 0..kq {
            h[(a, a)] += mu;
        }
        let rhs = nalgebra::DVector::from_column_slice(&qtg);
        let newton = h.cholesky().map(|c| c.solve(&rhs));

        let phi0 = objective(&r);
        let slope_of = |d: &[f64]| -> f64 { -d.iter().zip(&qtg).map(|(a, b)| a * b).sum::<f64>() };
        let mut improved = false;
        let mut stalled = false;
        let gradient_dir = qtg.clone();
        let dirs: Vec<Vec<f64>> = match newton {
            Some(d) => vec![d.as_slice().to_vec(), gradient_dir],
            None => vec![gradient_dir],
        };
        for d in dirs {
            let slope = slope_of(&d);
            if slope >= 0.0 {
                continue;
            }
            let mut t = 1.0;
            while t > 1e-20 {
                let trial: Vec<f64> = z.iter().zip(&d).map(|(a, b)| a + t * b).collect();
                let phi = objective(&residual_of(&trial));
                if phi <= phi0 + 1e-4 * t * slope {
                    if phi0 - phi > 1e-15 * phi0 {
                        improved = true;
                    }
                    z = trial;
                    stalled = !improved;
                    break;
                }
                t *= 0.5;
            }
            if improved || stalled {
                break;
            }
        }
        if !improved {
            // machine precision reached; accept if close to stationary
            converged = stationarity <= tol.max(1e-6);
            break;
        }
    }
    if !converged {
        return Err(Error::IterationCap {
            tol,
            iterations: max_iter,
        });
    }

    let local_c = local.coeffs_from_ortho(&z);
    let mut best_coeffs = vec![0.0; v.basis.len()];
    for (&j, c) in red.cols.iter().zip(&local_c) {
        best_coeffs[j] = c * scale;
    }
    let residual = v.residual(f, &best_coeffs);
    let distance = norm(&residual, kind);
    let functional = if residual.is_zero() {
        None
    } else {
        Some(norming_functional(&residual, kind)?)
    };
    Ok(ApproxResult {
        distance,
        best_coeffs,
        residual,
        functional,
        gap: 0.0,
    })
}

/// Distance in the given norm using the matching solver.
pub fn distance(
    f: &DenseVector,
    v: &Subspace,
    kind: NormKind,
    opts: &SolverOptions,
) -> Result<ApproxResult> {
    match kind {
        NormKind::Hilbert => dist_hilbert(f, v),
        NormKind::Lp(p) => dist_lp_with(f, v, p, opts.tol, opts.max_iter),
        NormKind::L1 | NormKind::LInf => dist_polyhedral(f, v, kind, opts.tol, opts.max_iter),
    }
}

/// Same as [`distance`], but treats `ℓ_2` as a generic smooth `ℓ_p` norm
/// (descent solver instead of orthogonal projection).
pub fn distance_generic(
    f: &DenseVector,
    v: &Subspace,
    kind: NormKind,
    opts: &SolverOptions,
) -> Result<ApproxResult> {
    match kind {
        NormKind::Hilbert => dist_lp_with(f, v, 2.0, opts.tol, opts.max_iter),
        _ => distance(f, v, kind, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn v(x: &[f64]) -> DenseVector {
        DenseVector::new(x.to_vec()).unwrap()
    }

    fn span(dim: usize, vs: &[&[f64]]) -> Subspace {
        Subspace::new(dim, vs.iter().map(|x| v(x)).collect()).unwrap()
    }

    #[test]
    fn gram_schmidt_examples() {
        let e0 = DenseVector::unit(2, 0);
        let s = gram_schmidt_extend(std::slice::from_ref(&e0), &DenseVector::unit(2, 1));
        assert_eq!(s.coeffs, vec![0.0]);
        assert_eq!(s.new_vector, Some(DenseVector::unit(2, 1)));

        let s = gram_schmidt_extend(std::slice::from_ref(&e0), &v(&[2.0, 0.0]));
        assert_eq!(s.coeffs, vec![2.0]);
        assert_eq!(s.new_vector, None);

        let s = gram_schmidt_extend(&[e0], &v(&[1.0, 1.0]));
        assert_eq!(s.coeffs, vec![1.0]);
        assert_eq!(s.new_vector, Some(v(&[0.0, 1.0])));
    }

    #[test]
    fn subspace_tracks_rank_and_orthonormality() {
        let s = span(3, &[&[1.0, 1.0, 0.0], &[2.0, 2.0, 0.0], &[0.0, 1.0, 1.0]]);
        assert_eq!(s.dim_span(), 2);
        assert_eq!(s.independent_indices(), &[0, 2]);
        assert!(s.orthonormality_defect() < 1e-12);
        assert!(matches!(
            Subspace::new(2, vec![DenseVector::unit(3, 0)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hilbert_examples() {
        let s = span(2, &[&[1.0, 0.0]]);
        assert_eq!(dist_hilbert(&DenseVector::unit(2, 1), &s).unwrap().distance, 1.0);
        assert_eq!(dist_hilbert(&DenseVector::unit(2, 0), &s).unwrap().distance, 0.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = dist_hilbert(&v(&[h, h]), &s).unwrap();
        assert_abs_diff_eq!(r.distance, h, epsilon = 1e-15);
        assert_abs_diff_eq!(r.best_coeffs[0], h, epsilon = 1e-15);
    }

    #[test]
    fn hilbert_requires_orthonormal_basis() {
        let s = span(2, &[&[1.0, 0.0]]).forget_orthonormal();
        assert_eq!(
            dist_hilbert(&DenseVector::unit(2, 1), &s).unwrap_err(),
            Error::MissingOrthonormalBasis
        );
    }

    #[test]
    fn hilbert_coeffs_refer_to_spanning_set() {
        let s = span(3, &[&[1.0, 1.0, 0.0], &[2.0, 2.0, 0.0], &[1.0, 0.0, 0.0]]);
        let f = v(&[0.3, -0.7, 0.2]);
        let r = dist_hilbert(&f, &s).unwrap();
        let again = s.residual(&f, &r.best_coeffs);
        assert!(again.sub(&r.residual).unwrap().max_abs() < 1e-14);
        assert_abs_diff_eq!(r.distance, 0.2, epsilon = 1e-14);
    }

    #[test]
    fn linf_examples() {
        let r = dist_linf(&v(&[1.0, 1.0]), &span(2, &[&[1.0, -1.0]]), 1e-9).unwrap();
        assert_abs_diff_eq!(r.distance, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.best_coeffs[0], 0.0, epsilon = 1e-12);

        let r = dist_linf(&v(&[1.0, 0.0]), &span(2, &[&[1.0, 0.0]]), 1e-9).unwrap();
        assert_abs_diff_eq!(r.distance, 0.0, epsilon = 1e-12);

        let r = dist_linf(&v(&[1.0, 1.0, 1.0]), &Subspace::empty(3), 1e-9).unwrap();
        assert_eq!(r.distance, 1.0);
    }

    #[test]
    fn linf_certificate_annihilates_subspace() {
        let s = span(3, &[&[1.0, 2.0, 0.5], &[0.0, 1.0, -1.0]]);
        let f = v(&[0.4, -0.3, 0.9]);
        let r = dist_linf(&f, &s, 1e-9).unwrap();
        let l = r.functional.unwrap();
        assert_abs_diff_eq!(l.dual_norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(l.apply(&f).unwrap(), r.distance, epsilon = 1e-12);
        for b in s.basis() {
            assert!(l.apply(b).unwrap().abs() < 1e-12);
        }
        assert!(r.gap.abs() < 1e-12);
    }

    #[test]
    fn l1_examples() {
        let r = dist_l1(&v(&[1.0, 0.0]), &span(2, &[&[1.0, 1.0]]), 1e-9).unwrap();
        assert_abs_diff_eq!(r.distance, 1.0, epsilon = 1e-12);
        let r = dist_l1(&DenseVector::zeros(2), &span(2, &[&[1.0, 1.0]]), 1e-9).unwrap();
        assert_eq!(r.distance, 0.0);
        let r = dist_l1(&v(&[0.0, 1.0]), &Subspace::empty(2), 1e-9).unwrap();
        assert_eq!(r.distance, 1.0);
    }

    #[test]
    fn l1_certificate_annihilates_subspace() {
        let s = span(4, &[&[1.0, 2.0, 0.5, 0.0], &[0.0, 1.0, -1.0, 3.0]]);
        let f = v(&[0.4, -0.3, 0.9, 0.1]);
        let r = dist_l1(&f, &s, 1e-9).unwrap();
        let l = r.functional.unwrap();
        assert_abs_diff_eq!(l.dual_norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(l.apply(&f).unwrap(), r.distance, epsilon = 1e-12);
        for b in s.basis() {
            assert!(l.apply(b).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn lp_examples() {
        let r = dist_lp(&DenseVector::unit(2, 1), &span(2, &[&[1.0, 0.0]]), 4.0, 1e-9).unwrap();
        assert_abs_diff_eq!(r.distance, 1.0, epsilon = 1e-12);
        let r = dist_lp(&v(&[1.0, 1.0]), &span(2, &[&[1.0, 1.0]]), 3.0, 1e-9).unwrap();
        assert_abs_diff_eq!(r.distance, 0.0, epsilon = 1e-12);
        assert!(matches!(
            dist_lp(&v(&[1.0, 1.0]), &Subspace::empty(2), 1.0, 1e-9),
            Err(Error::InvalidExponent(_))
        ));
    }

    #[test]
    fn lp_matches_hilbert_at_p2() {
        let s = span(4, &[&[1.0, 2.0, 0.5, 0.0], &[0.0, 1.0, -1.0, 3.0]]);
        let f = v(&[0.4, -0.3, 0.9, 0.1]);
        let a = dist_lp(&f, &s, 2.0, 1e-9).unwrap().distance;
        let b = dist_hilbert(&f, &s).unwrap().distance;
        assert_abs_diff_eq!(a, b, epsilon = 1e-12);
    }

    #[test]
    fn lp_functional_is_stationary() {
        let s = span(4, &[&[1.0, 2.0, 0.5, 0.0], &[0.0, 1.0, -1.0, 3.0]]);
        let f = v(&[0.4, -0.3, 0.9, 0.1]);
        for p in [1.5, 3.0, 4.0, 7.0] {
            let r = dist_lp(&f, &s, p, 1e-10).unwrap();
            let l = r.functional.unwrap();
            for b in s.basis() {
                assert!(l.apply(b).unwrap().abs() < 1e-8, "p = {p}");
            }
        }
    }

    #[test]
    fn support_reduction_ignores_disconnected_vectors() {
        // e_0 and e_1 never touch f = e_2, so the distance is ‖f‖.
        let s = span(3, &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        let f = v(&[0.0, 0.0, 0.5]);
        for kind in [NormKind::L1, NormKind::LInf, NormKind::Lp(3.0)] {
            let r = distance(&f, &s, kind, &SolverOptions::default()).unwrap();
            assert_eq!(r.distance, 0.5);
            assert_eq!(r.best_coeffs, vec![0.0, 0.0]);
        }
    }
}
