//! Small dense two-phase simplex method with Bland's anti-cycling rule.
//!
//! Solves
//!
//! ```text
//! minimize    c·x
//! subject to  a_i·x  (≤ | = | ≥)  b_i,   x ≥ 0
//! ```
//!
//! and returns both the primal optimum and the simplex multipliers `y`,
//! which solve the dual `max b·y s.t. Aᵀy ≤ c` (with `y_i ≤ 0` on `≤` rows
//! and `y_i ≥ 0` on `≥` rows).

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("problem is infeasible (phase-one residual {0:e})")]
    Infeasible(f64),
    #[error("objective is unbounded below")]
    Unbounded,
    #[error("iteration cap {0} reached")]
    IterationCap(usize),
    #[error("malformed problem: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Simplex multipliers, one per constraint, in the original row orientation.
    pub duals: Vec<f64>,
    pub iterations: usize,
}

const PIVOT_EPS: f64 = 1e-11;
const COST_EPS: f64 = 1e-12;
const FEAS_EPS: f64 = 1e-9;

pub const DEFAULT_MAX_ITER: usize = 100_000;

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        Self {
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn push(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn solve(&self, max_iter: usize) -> Result<LpSolution, LpError> {
        Tableau::build(self)?.run(self, max_iter)
    }
}

struct Tableau {
    rows: usize,
    cols: usize,
    // row-major, `cols + 1` entries per row; last entry is the rhs
    t: Vec<f64>,
    basis: Vec<usize>,
    // identity column each row started with
    initial: Vec<usize>,
    artificial_from: usize,
    row_sign: Vec<f64>,
    n_vars: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Result<Self, LpError> {
        let n = lp.objective.len();
        let m = lp.constraints.len();
        for (i, c) in lp.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(LpError::Malformed(format!(
                    "row {i} has {} coefficients, expected {n}",
                    c.coeffs.len()
                )));
            }
        }

        // normalize to b ≥ 0
        let mut rel = Vec::with_capacity(m);
        let mut row_sign = Vec::with_capacity(m);
        for c in &lp.constraints {
            if c.rhs < 0.0 {
                row_sign.push(-1.0);
                rel.push(match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                });
            } else {
                row_sign.push(1.0);
                rel.push(c.relation);
            }
        }

        let n_slack = rel.iter().filter(|r| **r != Relation::Eq).count();
        let n_art = rel.iter().filter(|r| **r != Relation::Le).count();
        let artificial_from = n + n_slack;
        let cols = artificial_from + n_art;
        let w = cols + 1;
        let mut t = vec![0.0; m * w];
        let mut basis = vec![0; m];
        let mut next_slack = n;
        let mut next_art = artificial_from;
        for (i, c) in lp.constraints.iter().enumerate() {
            let s = row_sign[i];
            let row = &mut t[i * w..(i + 1) * w];
            for (dst, a) in row[..n].iter_mut().zip(&c.coeffs) {
                *dst = s * a;
            }
            row[cols] = s * c.rhs;
            match rel[i] {
                Relation::Le => {
                    row[next_slack] = 1.0;
                    basis[i] = next_slack;
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -1.0;
                    next_slack += 1;
                    row[next_art] = 1.0;
                    basis[i] = next_art;
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = 1.0;
                    basis[i] = next_art;
                    next_art += 1;
                }
            }
        }
        let initial = basis.clone();
        Ok(Self {
            rows: m,
            cols,
            t,
            basis,
            initial,
            artificial_from,
            row_sign,
            n_vars: n,
        })
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * (self.cols + 1) + j]
    }

    #[inline]
    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.cols)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.cols + 1;
        let p = self.at(r, c);
        for v in &mut self.t[r * w..(r + 1) * w] {
            *v /= p;
        }
        let pivot_row: Vec<f64> = self.t[r * w..(r + 1) * w].to_vec();
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.t[i * w + c];
            if f != 0.0 {
                for (dst, src) in self.t[i * w..(i + 1) * w].iter_mut().zip(&pivot_row) {
                    *dst -= f * src;
                }
                self.t[i * w + c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs `d_j = c_j − c_Bᵀ B⁻¹ A_j` for the given cost vector.
    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for i in 0..self.rows {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                for (j, dj) in d.iter_mut().enumerate() {
                    *dj -= cb * self.at(i, j);
                }
            }
        }
        d
    }

    fn objective_value(&self, cost: &[f64]) -> f64 {
        (0..self.rows)
            .map(|i| cost[self.basis[i]] * self.rhs(i))
            .sum()
    }

    /// Runs simplex iterations for `cost` over columns `< allowed`.
    fn iterate(
        &mut self,
        cost: &[f64],
        allowed: usize,
        iterations: &mut usize,
        max_iter: usize,
    ) -> Result<(), LpError> {
        loop {
            let d = self.reduced_costs(cost);
            // Bland: lowest-index improving column
            let Some(enter) = (0..allowed).find(|&j| d[j] < -COST_EPS) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let a = self.at(i, enter);
                if a > PIVOT_EPS {
                    let ratio = self.rhs(i) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-14
                                || (ratio <= br + 1e-14 && self.basis[i] < self.basis[bi])
                            {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Err(LpError::Unbounded);
            };
            *iterations += 1;
            if *iterations > max_iter {
                return Err(LpError::IterationCap(max_iter));
            }
            self.pivot(r, enter);
        }
    }

    fn run(mut self, lp: &LinearProgram, max_iter: usize) -> Result<LpSolution, LpError> {
        let mut iterations = 0;

        if self.artificial_from < self.cols {
            let mut phase1 = vec![0.0; self.cols];
            for c in &mut phase1[self.artificial_from..] {
                *c = 1.0;
            }
            self.iterate(&phase1, self.cols, &mut iterations, max_iter)?;
            let infeas = self.objective_value(&phase1);
            if infeas > FEAS_EPS {
                return Err(LpError::Infeasible(infeas));
            }
            // Drive zero-level artificials out where a structural pivot exists;
            // rows where none exists are redundant and keep their artificial.
            for r in 0..self.rows {
                if self.basis[r] >= self.artificial_from {
                    if let Some(c) =
                        (0..self.artificial_from).find(|&j| self.at(r, j).abs() > PIVOT_EPS)
                    {
                        self.pivot(r, c);
                    }
                }
            }
        }

        let mut cost = vec![0.0; self.cols];
        cost[..self.n_vars].copy_from_slice(&lp.objective);
        self.iterate(&cost, self.artificial_from, &mut iterations, max_iter)?;

        let mut x = vec![0.0; self.n_vars];
        for i in 0..self.rows {
            let b = self.basis[i];
            if b < self.n_vars {
                x[b] = self.rhs(i);
            }
        }
        let objective = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();

        // y = c_Bᵀ B⁻¹, read from the columns that formed the starting identity.
        let duals = (0..self.rows)
            .map(|k| {
                let col = self.initial[k];
                let pi: f64 = (0..self.rows)
                    .map(|i| cost[self.basis[i]] * self.at(i, col))
                    .sum();
                pi * self.row_sign[k]
            })
            .collect();

        Ok(LpSolution {
            x,
            objective,
            duals,
            iterations,
        })
    }
}
