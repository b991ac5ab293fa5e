use std::ops::{Add, Mul, Neg, Sub};

use super::{solve, LinearProgram, LpError, LpStatus};
use crate::linalg::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Var(usize);

impl Var {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Affine expression over builder variables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinExpr {
    terms: Vec<(usize, f64)>,
    constant: f64,
}

impl From<Var> for LinExpr {
    fn from(v: Var) -> Self {
        Self {
            terms: vec![(v.0, 1.0)],
            constant: 0.0,
        }
    }
}

impl LinExpr {
    pub fn constant(c: f64) -> Self {
        Self {
            terms: Vec::new(),
            constant: c,
        }
    }

    pub fn term(v: Var, coef: f64) -> Self {
        Self {
            terms: vec![(v.0, coef)],
            constant: 0.0,
        }
    }

    /// `Σ coefs[i] * exprs[i]`
    pub fn combination(coefs: &[f64], exprs: &[LinExpr]) -> Self {
        let mut out = LinExpr::default();
        for (c, e) in coefs.iter().zip(exprs) {
            if *c != 0.0 {
                out.add_scaled(e, *c);
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &LinExpr, scale: f64) {
        self.terms
            .extend(other.terms.iter().map(|(j, c)| (*j, c * scale)));
        self.constant += other.constant * scale;
    }

    pub fn value(&self, point: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|(j, c)| c * point[*j]).sum::<f64>()
    }

    fn dense(&self, n: usize) -> Vec<f64> {
        let mut row = vec![0.0; n];
        for (j, c) in &self.terms {
            row[*j] += c;
        }
        row
    }
}

impl Add for LinExpr {
    type Output = LinExpr;
    fn add(mut self, rhs: LinExpr) -> LinExpr {
        self.add_scaled(&rhs, 1.0);
        self
    }
}

impl Sub for LinExpr {
    type Output = LinExpr;
    fn sub(mut self, rhs: LinExpr) -> LinExpr {
        self.add_scaled(&rhs, -1.0);
        self
    }
}

impl Mul<f64> for LinExpr {
    type Output = LinExpr;
    fn mul(self, rhs: f64) -> LinExpr {
        let mut out = LinExpr::default();
        out.add_scaled(&self, rhs);
        out
    }
}

impl Neg for LinExpr {
    type Output = LinExpr;
    fn neg(self) -> LinExpr {
        self * -1.0
    }
}

/// Incremental construction of a [`LinearProgram`] from affine expressions.
#[derive(Debug, Clone, Default)]
pub struct LpBuilder {
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// each entry: expr >= 0
    ge: Vec<LinExpr>,
    /// each entry: expr == 0
    eq: Vec<LinExpr>,
}

#[derive(Debug, Clone)]
pub struct ModelSolution {
    pub status: LpStatus,
    pub point: Vec<f64>,
    /// Objective value including the expression's constant term.
    pub objective: f64,
    pub residual: f64,
}

impl ModelSolution {
    pub fn value(&self, e: &LinExpr) -> f64 {
        e.value(&self.point)
    }

    pub fn values(&self, es: &[LinExpr]) -> Vec<f64> {
        es.iter().map(|e| e.value(&self.point)).collect()
    }
}

impl LpBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(&mut self, lower: f64, upper: f64) -> Var {
        self.lower.push(lower);
        self.upper.push(upper);
        Var(self.lower.len() - 1)
    }

    pub fn free_var(&mut self) -> Var {
        self.var(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn nonneg_var(&mut self) -> Var {
        self.var(0.0, f64::INFINITY)
    }

    pub fn free_vector(&mut self, n: usize) -> Vec<LinExpr> {
        (0..n).map(|_| LinExpr::from(self.free_var())).collect()
    }

    pub fn ge_zero(&mut self, e: LinExpr) {
        self.ge.push(e);
    }

    pub fn eq_zero(&mut self, e: LinExpr) {
        self.eq.push(e);
    }

    /// New variable `s >= |e|`, tight whenever `s` is minimized with positive weight.
    pub fn abs_bound(&mut self, e: &LinExpr) -> LinExpr {
        let s = LinExpr::from(self.nonneg_var());
        self.ge_zero(s.clone() - e.clone());
        self.ge_zero(s.clone() + e.clone());
        s
    }

    pub fn num_vars(&self) -> usize {
        self.lower.len()
    }

    pub fn to_program(&self, objective: &LinExpr) -> LinearProgram {
        let n = self.num_vars();
        let mut lp = LinearProgram::new(objective.dense(n));
        // expr >= 0  <=>  -(terms) <= constant
        let ineq_rows: Vec<Vec<f64>> = self
            .ge
            .iter()
            .map(|e| e.dense(n).into_iter().map(|v| -v).collect())
            .collect();
        lp.ineq_rhs = self.ge.iter().map(|e| e.constant).collect();
        lp.ineq_matrix = if ineq_rows.is_empty() {
            Matrix::zeros(0, n)
        } else {
            Matrix::from_rows(&ineq_rows).expect("rows share a width")
        };
        let eq_rows: Vec<Vec<f64>> = self.eq.iter().map(|e| e.dense(n)).collect();
        lp.eq_rhs = self.eq.iter().map(|e| -e.constant).collect();
        lp.eq_matrix = if eq_rows.is_empty() {
            Matrix::zeros(0, n)
        } else {
            Matrix::from_rows(&eq_rows).expect("rows share a width")
        };
        lp.lower = self.lower.clone();
        lp.upper = self.upper.clone();
        lp
    }

    pub fn minimize(&self, objective: &LinExpr) -> Result<ModelSolution, LpError> {
        let lp = self.to_program(objective);
        let sol = solve(&lp)?;
        Ok(ModelSolution {
            status: sol.status,
            objective: sol.objective + objective.constant,
            residual: sol.residual,
            point: sol.point,
        })
    }

    /// Feasibility query: minimizes the zero objective.
    pub fn feasible_point(&self) -> Result<Option<Vec<f64>>, LpError> {
        let sol = self.minimize(&LinExpr::default())?;
        Ok((sol.status == LpStatus::Optimal).then_some(sol.point))
    }
}
