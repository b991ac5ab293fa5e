use std::borrow::Cow;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{OrbaError, Result};
use crate::linalg::Matrix;
use crate::lp::{LinExpr, LpBuilder};

/// Smallest |det| accepted for the matrix of a transformed orthant.
pub const MIN_DETERMINANT: f64 = 1e-10;

/// A closed convex polyhedral cone in coordinate space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConeSpec {
    /// `x >= 0` componentwise.
    Orthant { dim: usize },
    /// `T x >= 0` componentwise for an invertible square `T`.
    TransformedOrthant { matrix: Matrix },
    /// `A x >= 0` componentwise.
    Polyhedral { matrix: Matrix },
    /// The cone generated by `Σ map_i(cone_i)`; used for sums of ordered subspaces.
    Sum { parts: Vec<ConePart> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ConePart {
    /// Maps coordinates of the part into coordinates of the sum.
    pub map: Matrix,
    pub cone: ConeSpec,
}

impl ConeSpec {
    pub fn dim(&self) -> usize {
        match self {
            ConeSpec::Orthant { dim } => *dim,
            ConeSpec::TransformedOrthant { matrix } | ConeSpec::Polyhedral { matrix } => {
                matrix.cols()
            }
            ConeSpec::Sum { parts } => parts.first().map_or(0, |p| p.map.rows()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ConeSpec::Orthant { dim } => {
                if *dim == 0 {
                    return Err(OrbaError::Descriptor("orthant of dimension 0".into()));
                }
            }
            ConeSpec::TransformedOrthant { matrix } => {
                if !matrix.is_square() || matrix.rows() == 0 {
                    return Err(OrbaError::Descriptor(
                        "transformed orthant needs a nonempty square matrix".into(),
                    ));
                }
                let det = matrix.determinant();
                if det.abs() < MIN_DETERMINANT {
                    return Err(OrbaError::Descriptor(format!(
                        "transformed orthant matrix is singular (det = {det:e})"
                    )));
                }
            }
            ConeSpec::Polyhedral { matrix } => {
                if matrix.rows() == 0 || matrix.cols() == 0 {
                    return Err(OrbaError::Descriptor("empty polyhedral cone matrix".into()));
                }
            }
            ConeSpec::Sum { parts } => {
                let dim = self.dim();
                if parts.is_empty() || dim == 0 {
                    return Err(OrbaError::Descriptor("sum cone without parts".into()));
                }
                for p in parts {
                    p.cone.validate()?;
                    if p.map.rows() != dim || p.map.cols() != p.cone.dim() {
                        return Err(OrbaError::Descriptor(
                            "sum cone part map has the wrong shape".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// The inequality matrix `A` with cone `{x : A x >= 0}`, when the cone is given that way.
    pub fn inequalities(&self) -> Option<Cow<'_, Matrix>> {
        match self {
            ConeSpec::Orthant { dim } => Some(Cow::Owned(Matrix::identity(*dim))),
            ConeSpec::TransformedOrthant { matrix } | ConeSpec::Polyhedral { matrix } => {
                Some(Cow::Borrowed(matrix))
            }
            ConeSpec::Sum { .. } => None,
        }
    }

    /// Square invertible inequality matrix, if the cone is simplicial.
    pub fn simplicial_matrix(&self) -> Option<Cow<'_, Matrix>> {
        let a = self.inequalities()?;
        if !a.is_square() || a.determinant().abs() < MIN_DETERMINANT {
            return None;
        }
        Some(a)
    }

    /// Extreme rays of a simplicial cone: the columns of `A^{-1}`.
    pub fn simplicial_generators(&self) -> Option<Vec<Vec<f64>>> {
        let inv = self.simplicial_matrix()?.inverse()?;
        Some((0..inv.cols()).map(|j| inv.column(j)).collect())
    }

    /// Membership `x ∈ cone` with absolute slack `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool> {
        if x.len() != self.dim() {
            return Err(OrbaError::Dimension {
                context: "cone membership",
                expected: self.dim(),
                found: x.len(),
            });
        }
        match self.inequalities() {
            Some(a) => Ok(a.mul_vec(x).iter().all(|v| *v >= -tol)),
            None => {
                let mut b = LpBuilder::new();
                let z: Vec<LinExpr> = x.iter().map(|v| LinExpr::constant(*v)).collect();
                self.encode(&mut b, &z);
                Ok(b.feasible_point()?.is_some())
            }
        }
    }

    /// Smallest value of the defining inequalities at `x`; negative means outside.
    /// Only available for inequality-described cones.
    pub fn margin(&self, x: &[f64]) -> Option<f64> {
        let a = self.inequalities()?;
        Some(a.mul_vec(x).into_iter().fold(f64::INFINITY, f64::min))
    }

    /// Adds constraints forcing the affine vector `z` into the cone.
    pub fn encode(&self, b: &mut LpBuilder, z: &[LinExpr]) {
        match self.inequalities() {
            Some(a) => {
                for i in 0..a.rows() {
                    b.ge_zero(LinExpr::combination(a.row(i), z));
                }
            }
            None => {
                let ConeSpec::Sum { parts } = self else {
                    unreachable!("only sum cones lack inequalities")
                };
                let mut total: Vec<LinExpr> = vec![LinExpr::default(); z.len()];
                for part in parts {
                    let p = b.free_vector(part.cone.dim());
                    part.cone.encode(b, &p);
                    for (i, t) in total.iter_mut().enumerate() {
                        t.add_scaled(&LinExpr::combination(part.map.row(i), &p), 1.0);
                    }
                }
                for (t, zi) in total.into_iter().zip(z) {
                    b.eq_zero(t - zi.clone());
                }
            }
        }
    }

    /// The cone `{c : B c ∈ self}` on the coordinates of the column space of `basis`.
    pub fn restrict(&self, basis: &Matrix) -> Result<ConeSpec> {
        match self.inequalities() {
            Some(a) => Ok(ConeSpec::Polyhedral {
                matrix: a.mul(basis),
            }),
            None => Err(OrbaError::Capability(
                "restricting a generated (sum) cone to a subspace".into(),
            )),
        }
    }

    /// Whether the cone contains no line; only decided for inequality-described cones.
    pub fn is_pointed(&self, tol: f64) -> Option<bool> {
        let a = self.inequalities()?;
        Some(a.rank(tol) == self.dim())
    }
}
