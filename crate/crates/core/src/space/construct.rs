//! Building new ordered spaces from old ones.

use std::sync::Arc;

use crate::error::{OrbaError, Result};
use crate::linalg::Matrix;
use crate::lp::{LinExpr, LpBuilder, LpStatus};

use super::{ConePart, ConeSpec, InfSumNorm, NormSpec, OrderedSpace, QuotientNorm, SpaceId};

const RANK_TOL: f64 = 1e-10;

/// Injective linear maps of two spaces into a common ambient coordinate space.
#[derive(Debug, Clone, PartialEq)]
pub struct SumEmbedding {
    pub left_map: Matrix,
    pub right_map: Matrix,
}

impl SumEmbedding {
    /// Both spaces are carried by their own ambient embeddings (or are the ambient space).
    pub fn from_spaces(left: &OrderedSpace, right: &OrderedSpace) -> Self {
        let emb = |s: &OrderedSpace| {
            s.embedding()
                .cloned()
                .unwrap_or_else(|| Matrix::identity(s.dim()))
        };
        Self {
            left_map: emb(left),
            right_map: emb(right),
        }
    }
}

/// Coordinates in `basis` of every column of `m`.
fn coordinates_in(basis: &Matrix, m: &Matrix, tol: f64) -> Result<Matrix> {
    let cols = (0..m.cols())
        .map(|j| {
            basis
                .coordinates_of(&m.column(j), tol)
                .ok_or_else(|| OrbaError::NotInSpace("column outside the chosen basis".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    if cols.is_empty() {
        return Ok(Matrix::zeros(basis.cols(), 0));
    }
    Matrix::from_columns(&cols)
}

/// A basis of the column space of `m`: the identity when `m` has full row rank.
fn span_basis(m: &Matrix) -> Matrix {
    if m.rank(RANK_TOL) == m.rows() {
        Matrix::identity(m.rows())
    } else {
        m.column_basis(RANK_TOL)
    }
}

/// The space `D1 + D2` with norm `inf { ‖x‖₁ + ‖y‖₂ : z = x + y }` and the cone
/// generated by both embedded cones.
///
/// Coordinates are ambient coordinates when the two images span the ambient
/// space, otherwise coordinates in a basis of the span (recorded as the
/// embedding of the result).
pub fn sum_space(
    id: impl Into<SpaceId>,
    left: Arc<OrderedSpace>,
    right: Arc<OrderedSpace>,
    embedding: &SumEmbedding,
) -> Result<OrderedSpace> {
    let SumEmbedding {
        left_map,
        right_map,
    } = embedding;
    let m = left_map.rows();
    if right_map.rows() != m {
        return Err(OrbaError::Dimension {
            context: "sum-space ambient dimension",
            expected: m,
            found: right_map.rows(),
        });
    }
    if left_map.cols() != left.dim() || right_map.cols() != right.dim() {
        return Err(OrbaError::Descriptor(
            "sum-space embedding does not match the factor dimensions".into(),
        ));
    }
    if left_map.rank(RANK_TOL) != left.dim() || right_map.rank(RANK_TOL) != right.dim() {
        return Err(OrbaError::Descriptor("sum-space embeddings must be injective".into()));
    }
    let basis = span_basis(&left_map.hcat(right_map));
    let tol = left.tolerances().num;
    let lm = coordinates_in(&basis, left_map, tol)?;
    let rm = coordinates_in(&basis, right_map, tol)?;
    let cone = ConeSpec::Sum {
        parts: vec![
            ConePart {
                map: lm.clone(),
                cone: left.cone().clone(),
            },
            ConePart {
                map: rm.clone(),
                cone: right.cone().clone(),
            },
        ],
    };
    let tolerances = left.tolerances();
    let norm = NormSpec::InfSum(Box::new(InfSumNorm {
        left,
        right,
        left_map: lm,
        right_map: rm,
    }));
    OrderedSpace::builder(id, cone, norm)
        .tolerances(tolerances)
        .embedding(basis)
        .build()
}

/// The order-unit space `R a + R x` inside an ambient ordered coordinate space.
///
/// Requires `-a ⪯ x ⪯ a`. The result has coordinates in the basis `(a, x)`
/// (or just `(a)` when `x` is parallel to `a`), the ambient order restricted
/// to the span, and the norm `inf { s >= 0 : -s a ⪯ y ⪯ s a }`, so `‖a‖ = 1`.
pub fn line_space(
    id: impl Into<SpaceId>,
    a: &[f64],
    x: &[f64],
    ambient_cone: &ConeSpec,
) -> Result<OrderedSpace> {
    order_unit_span(id, a, std::slice::from_ref(&x.to_vec()), ambient_cone)
}

/// Like [`line_space`] for several dominated elements at once: the span of
/// `a` and all `xs`, normed by the order unit `a`.
pub fn order_unit_span(
    id: impl Into<SpaceId>,
    a: &[f64],
    xs: &[Vec<f64>],
    ambient_cone: &ConeSpec,
) -> Result<OrderedSpace> {
    let m = ambient_cone.dim();
    if a.len() != m {
        return Err(OrbaError::Dimension {
            context: "order unit",
            expected: m,
            found: a.len(),
        });
    }
    if a.iter().all(|v| *v == 0.0) {
        return Err(OrbaError::Order("the order unit must be nonzero".into()));
    }
    let tol = crate::tol::CONE;
    for x in xs {
        if x.len() != m {
            return Err(OrbaError::Dimension {
                context: "dominated element",
                expected: m,
                found: x.len(),
            });
        }
        let upper: Vec<f64> = a.iter().zip(x).map(|(ai, xi)| ai - xi).collect();
        let lower: Vec<f64> = a.iter().zip(x).map(|(ai, xi)| ai + xi).collect();
        if !(ambient_cone.contains(&upper, tol)? && ambient_cone.contains(&lower, tol)?) {
            return Err(OrbaError::Order(format!("-a ⪯ x ⪯ a fails for x = {x:?}")));
        }
    }
    let mut cols = vec![a.to_vec()];
    cols.extend(xs.iter().cloned());
    let basis = Matrix::from_columns(&cols)?.column_basis(RANK_TOL);
    let k = basis.cols();
    let cone = ambient_cone.restrict(&basis)?;
    let mut unit = vec![0.0; k];
    unit[0] = 1.0;
    OrderedSpace::builder(id, cone, NormSpec::OrderUnit { unit })
        .embedding(basis)
        .build()
}

/// Output of [`image_space`].
#[derive(Debug, Clone)]
pub struct ImageSpace {
    pub space: OrderedSpace,
    /// Whether `T(D⁺)` is strictly smaller than the cone of the image space.
    /// Decided when the image cone is simplicial, `None` otherwise.
    pub strict_subcone: Option<bool>,
}

/// `T(D)` with the quotient norm `inf { ‖x‖ : T x = z }`, ordered by the
/// target cone restricted to the image.
pub fn image_space(
    id: impl Into<SpaceId>,
    source: Arc<OrderedSpace>,
    map: &Matrix,
    target_cone: &ConeSpec,
) -> Result<ImageSpace> {
    if map.cols() != source.dim() || map.rows() != target_cone.dim() {
        return Err(OrbaError::Dimension {
            context: "image map",
            expected: source.dim(),
            found: map.cols(),
        });
    }
    if !is_order_preserving(&source, map, target_cone)? {
        return Err(OrbaError::Order(
            "map does not send the source cone into the target cone".into(),
        ));
    }
    let basis = span_basis(map);
    let full = basis.cols() == map.rows();
    let cone = if full {
        target_cone.clone()
    } else {
        target_cone.restrict(&basis)?
    };
    let tol = source.tolerances();
    let coord_map = coordinates_in(&basis, map, tol.num)?;
    let strict_subcone = match cone.simplicial_generators() {
        Some(gens) => {
            let mut strict = false;
            for g in gens {
                if !cone_image_contains(&source, &coord_map, &g)? {
                    strict = true;
                    break;
                }
            }
            Some(strict)
        }
        None => None,
    };
    let norm = NormSpec::Quotient(Box::new(QuotientNorm {
        source,
        map: coord_map,
        target_cone: target_cone.clone(),
    }));
    let mut builder = OrderedSpace::builder(id, cone, norm).tolerances(tol);
    if !full {
        builder = builder.embedding(basis);
    }
    Ok(ImageSpace {
        space: builder.build()?,
        strict_subcone,
    })
}

/// Is `z = T x` for some `x` in the cone of `source`?
fn cone_image_contains(source: &OrderedSpace, map: &Matrix, z: &[f64]) -> Result<bool> {
    let mut b = LpBuilder::new();
    let x = b.free_vector(source.dim());
    source.cone().encode(&mut b, &x);
    for (i, zi) in z.iter().enumerate() {
        b.eq_zero(LinExpr::combination(map.row(i), &x) - LinExpr::constant(*zi));
    }
    Ok(b.feasible_point()?.is_some())
}

/// Whether `T` maps the cone of `source` into `target_cone`.
///
/// Simplicial source cones are checked on their extreme rays. Otherwise each
/// target inequality is minimized over the source cone intersected with the
/// unit box; a cone is scale invariant, so a negative minimum there is a
/// violation.
pub fn is_order_preserving(
    source: &OrderedSpace,
    map: &Matrix,
    target_cone: &ConeSpec,
) -> Result<bool> {
    let tol = source.tolerances().cone;
    if let Some(gens) = source.cone().simplicial_generators() {
        for g in gens {
            if !target_cone.contains(&map.mul_vec(&g), tol)? {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    let Some(a) = target_cone.inequalities() else {
        return Err(OrbaError::Capability(
            "order-preservation check into a generated cone from a non-simplicial cone".into(),
        ));
    };
    let am = a.mul(map);
    for i in 0..am.rows() {
        let mut b = LpBuilder::new();
        let x: Vec<LinExpr> = (0..source.dim())
            .map(|_| LinExpr::from(b.var(-1.0, 1.0)))
            .collect();
        source.cone().encode(&mut b, &x);
        let sol = b.minimize(&LinExpr::combination(am.row(i), &x))?;
        if sol.status == LpStatus::Optimal && sol.objective < -tol {
            return Ok(false);
        }
    }
    Ok(true)
}
