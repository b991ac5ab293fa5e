//! Dense linear programming.
//!
//! Every infimum in the crate (order-unit, sum and quotient norms, dominating
//! elements, generating witnesses) is reduced to a small linear program and
//! solved here with a two-phase tableau simplex under Bland's rule. Programs
//! are tiny, so the solver favours determinism over speed: identical input
//! bits produce identical output bits.

mod model;
mod simplex;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::Matrix;

pub use model::{LinExpr, LpBuilder, ModelSolution, Var};

/// Largest number of structural variables accepted by [`solve`].
pub const DEFAULT_VAR_CAP: usize = 512;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("program has {vars} variables, above the cap of {cap}")]
    TooLarge { vars: usize, cap: usize },
    #[error("malformed program: {0}")]
    Malformed(String),
    #[error("numerically singular basis: {0}")]
    Singular(String),
    #[error("iteration limit of {0} pivots reached")]
    IterationLimit(usize),
}

/// `min c·x` subject to `A_ineq x <= b_ineq`, `A_eq x = b_eq`, `lower <= x <= upper`.
///
/// Bounds may be infinite; a variable with both bounds infinite is free.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub ineq_matrix: Matrix,
    pub ineq_rhs: Vec<f64>,
    pub eq_matrix: Matrix,
    pub eq_rhs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal point; empty unless `status` is `Optimal`.
    pub point: Vec<f64>,
    pub objective: f64,
    /// Largest violation of any constraint or bound at `point`.
    pub residual: f64,
    pub pivots: usize,
}

impl LinearProgram {
    /// A program with only variable bounds; constraints are appended by the caller.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            objective,
            ineq_matrix: Matrix::zeros(0, n),
            ineq_rhs: Vec::new(),
            eq_matrix: Matrix::zeros(0, n),
            eq_rhs: Vec::new(),
            lower: vec![f64::NEG_INFINITY; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self, cap: usize) -> Result<(), LpError> {
        let n = self.num_vars();
        if n > cap {
            return Err(LpError::TooLarge { vars: n, cap });
        }
        let shape_ok = self.ineq_matrix.cols() == n
            && self.eq_matrix.cols() == n
            && self.ineq_matrix.rows() == self.ineq_rhs.len()
            && self.eq_matrix.rows() == self.eq_rhs.len()
            && self.lower.len() == n
            && self.upper.len() == n;
        if !shape_ok {
            return Err(LpError::Malformed("inconsistent dimensions".into()));
        }
        let finite = self
            .objective
            .iter()
            .chain(&self.ineq_rhs)
            .chain(&self.eq_rhs)
            .all(|v| v.is_finite());
        if !finite {
            return Err(LpError::Malformed("non-finite coefficient".into()));
        }
        for j in 0..n {
            if self.lower[j].is_nan() || self.upper[j].is_nan() || self.lower[j] > self.upper[j] {
                return Err(LpError::Malformed(format!("bad bounds on variable {j}")));
            }
            if self.lower[j] == f64::INFINITY || self.upper[j] == f64::NEG_INFINITY {
                return Err(LpError::Malformed(format!("empty bounds on variable {j}")));
            }
        }
        Ok(())
    }

    /// Largest constraint or bound violation at `x`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        let mut r: f64 = 0.0;
        for (i, b) in self.ineq_rhs.iter().enumerate() {
            r = r.max(crate::linalg::dot(self.ineq_matrix.row(i), x) - b);
        }
        for (i, b) in self.eq_rhs.iter().enumerate() {
            r = r.max((crate::linalg::dot(self.eq_matrix.row(i), x) - b).abs());
        }
        for (j, v) in x.iter().enumerate() {
            r = r.max(self.lower[j] - v).max(v - self.upper[j]);
        }
        r
    }
}

/// Solves `lp` with the default variable cap.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    solve_with_cap(lp, DEFAULT_VAR_CAP)
}

pub fn solve_with_cap(lp: &LinearProgram, cap: usize) -> Result<LpSolution, LpError> {
    lp.validate(cap)?;
    simplex::solve(lp)
}
