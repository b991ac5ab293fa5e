//! Finite-dimensional ordered Banach spaces.
//!
//! An [`OrderedSpace`] is coordinate space `R^n` together with a closed
//! polyhedral cone ([`ConeSpec`]) and a norm ([`NormSpec`]). Spaces are
//! immutable once built and are identified by their [`SpaceId`]. The
//! constructions in [`construct`] build new spaces from old ones: the sum of
//! two subspaces, the order-unit space spanned by a dominated element, and the
//! image of an order-preserving map with its quotient norm.

mod cone;
pub mod construct;
pub mod descriptor;
mod norm;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{OrbaError, Result};
use crate::linalg::Matrix;
use crate::lp::{LinExpr, LpBuilder, LpStatus, ModelSolution};
use crate::tol::Tolerances;

pub use cone::{ConePart, ConeSpec, MIN_DETERMINANT};
pub use construct::{image_space, line_space, order_unit_span, sum_space, ImageSpace, SumEmbedding};
pub use descriptor::{NormDescriptor, SpaceDescriptor};
pub use norm::{InfSumNorm, NormSpec, QuotientNorm};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpaceId(Arc<str>);

impl SpaceId {
    pub fn new(id: impl AsRef<str>) -> Self {
        Self(Arc::from(id.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for SpaceId {
    fn from(s: &str) -> Self {
        SpaceId::new(s)
    }
}

impl From<String> for SpaceId {
    fn from(s: String) -> Self {
        SpaceId::new(s)
    }
}

impl From<&String> for SpaceId {
    fn from(s: &String) -> Self {
        SpaceId::new(s)
    }
}

/// Coordinates tagged with the identity of their carrier space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vector {
    space: SpaceId,
    coords: Vec<f64>,
}

impl Vector {
    pub fn new(space: &OrderedSpace, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != space.dim() {
            return Err(OrbaError::Dimension {
                context: "vector",
                expected: space.dim(),
                found: coords.len(),
            });
        }
        Ok(Self {
            space: space.id.clone(),
            coords,
        })
    }

    pub fn zeros(space: &OrderedSpace) -> Self {
        Self {
            space: space.id.clone(),
            coords: vec![0.0; space.dim()],
        }
    }

    pub fn space_id(&self) -> &SpaceId {
        &self.space
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|v| *v == 0.0)
    }

    fn same_carrier(&self, other: &Vector) -> Result<()> {
        if self.space != other.space {
            return Err(OrbaError::Carrier {
                expected: self.space.to_string(),
                found: other.space.to_string(),
            });
        }
        Ok(())
    }

    /// `alpha * self + beta * other`
    pub fn combine(&self, alpha: f64, other: &Vector, beta: f64) -> Result<Vector> {
        self.same_carrier(other)?;
        Ok(Vector {
            space: self.space.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        })
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.combine(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.combine(1.0, other, -1.0)
    }

    pub fn scale(&self, alpha: f64) -> Vector {
        Vector {
            space: self.space.clone(),
            coords: self.coords.iter().map(|v| alpha * v).collect(),
        }
    }

    pub fn neg(&self) -> Vector {
        self.scale(-1.0)
    }

    /// Componentwise modulus; the lattice `|x|` for orthant cones.
    pub fn abs(&self) -> Vector {
        Vector {
            space: self.space.clone(),
            coords: self.coords.iter().map(|v| v.abs()).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Vector) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// A finite-dimensional ordered Banach space with a closed polyhedral cone.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedSpace {
    id: SpaceId,
    dim: usize,
    cone: ConeSpec,
    norm: NormSpec,
    directed: bool,
    embedding: Option<Matrix>,
    tol: Tolerances,
}

/// Options for [`OrderedSpace`] construction.
#[derive(Debug, Clone)]
pub struct SpaceBuilder {
    id: SpaceId,
    cone: ConeSpec,
    norm: NormSpec,
    allow_non_directed: bool,
    embedding: Option<Matrix>,
    tol: Tolerances,
}

impl SpaceBuilder {
    pub fn tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    /// Accept spaces whose cone is not generating; used for negative tests.
    pub fn allow_non_directed(mut self) -> Self {
        self.allow_non_directed = true;
        self
    }

    /// Columns give the ambient coordinates of the basis vectors of the space.
    pub fn embedding(mut self, basis: Matrix) -> Self {
        self.embedding = Some(basis);
        self
    }

    pub fn build(self) -> Result<OrderedSpace> {
        self.cone.validate()?;
        let dim = self.cone.dim();
        let space = OrderedSpace {
            id: self.id,
            dim,
            cone: self.cone,
            norm: self.norm,
            directed: false,
            embedding: self.embedding,
            tol: self.tol,
        };
        space.validate_norm()?;
        if let Some(e) = &space.embedding {
            if e.cols() != dim || e.rank(1e-10) != dim {
                return Err(OrbaError::Descriptor(
                    "embedding must be injective with one column per coordinate".into(),
                ));
            }
        }
        // Simplicial cones are generating; everything else needs a witness per coordinate.
        let simplicial = space.cone.simplicial_matrix().is_some();
        let directed = simplicial || (0..dim).try_fold(true, |acc, j| {
            Ok::<_, OrbaError>(acc && space.generating_witness(j)?.is_some())
        })?;
        if !directed && !self.allow_non_directed {
            return Err(OrbaError::NotDirected(space.id.to_string()));
        }
        Ok(OrderedSpace { directed, ..space })
    }
}

impl OrderedSpace {
    pub fn builder(id: impl Into<SpaceId>, cone: ConeSpec, norm: NormSpec) -> SpaceBuilder {
        SpaceBuilder {
            id: id.into(),
            cone,
            norm,
            allow_non_directed: false,
            embedding: None,
            tol: Tolerances::default(),
        }
    }

    /// Builds a directed space with default tolerances.
    pub fn new(id: impl Into<SpaceId>, cone: ConeSpec, norm: NormSpec) -> Result<Self> {
        Self::builder(id, cone, norm).build()
    }

    /// `R^n` with the orthant cone and the weighted ℓ¹ norm: a Banach lattice.
    pub fn weighted_l1_lattice(id: impl Into<SpaceId>, weights: Vec<f64>) -> Result<Self> {
        let dim = weights.len();
        Self::new(id, ConeSpec::Orthant { dim }, NormSpec::WeightedL1 { weights })
    }

    /// ℓ¹ norm on `R^n` ordered by nonnegative partial sums.
    pub fn partial_sum_space(id: impl Into<SpaceId>, n: usize) -> Result<Self> {
        Self::new(
            id,
            ConeSpec::TransformedOrthant {
                matrix: Matrix::partial_sums(n),
            },
            NormSpec::WeightedL1 {
                weights: vec![1.0; n],
            },
        )
    }

    pub fn id(&self) -> &SpaceId {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    pub fn norm_spec(&self) -> &NormSpec {
        &self.norm
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn embedding(&self) -> Option<&Matrix> {
        self.embedding.as_ref()
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }

    /// Orthant cone with a weighted ℓ¹ or sup norm.
    pub fn is_lattice_instance(&self) -> bool {
        matches!(self.cone, ConeSpec::Orthant { .. })
            && matches!(self.norm, NormSpec::WeightedL1 { .. } | NormSpec::Sup)
    }

    pub fn vector(&self, coords: Vec<f64>) -> Result<Vector> {
        Vector::new(self, coords)
    }

    pub fn basis_vector(&self, j: usize) -> Vector {
        let mut c = vec![0.0; self.dim];
        c[j] = 1.0;
        Vector {
            space: self.id.clone(),
            coords: c,
        }
    }

    pub fn check_carrier(&self, x: &Vector) -> Result<()> {
        if x.space != self.id {
            return Err(OrbaError::Carrier {
                expected: self.id.to_string(),
                found: x.space.to_string(),
            });
        }
        if x.dim() != self.dim {
            return Err(OrbaError::Dimension {
                context: "vector",
                expected: self.dim,
                found: x.dim(),
            });
        }
        Ok(())
    }

    fn validate_norm(&self) -> Result<()> {
        let dim = self.dim;
        match &self.norm {
            NormSpec::WeightedL1 { weights } => {
                if weights.len() != dim {
                    return Err(OrbaError::Dimension {
                        context: "weighted l1 weights",
                        expected: dim,
                        found: weights.len(),
                    });
                }
                if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
                    return Err(OrbaError::Descriptor(
                        "weighted l1 weights must be finite and strictly positive".into(),
                    ));
                }
            }
            NormSpec::Sup => {}
            NormSpec::OrderUnit { unit } => {
                if unit.len() != dim {
                    return Err(OrbaError::Dimension {
                        context: "order unit",
                        expected: dim,
                        found: unit.len(),
                    });
                }
                if let Some(a) = self.cone.simplicial_matrix() {
                    // Interior points of a simplicial cone are exactly the order units.
                    if a.mul_vec(unit).iter().any(|v| *v <= 0.0) {
                        return Err(OrbaError::Descriptor(format!(
                            "{unit:?} is not an order unit: it lies on the boundary of the cone"
                        )));
                    }
                    return Ok(());
                }
                if self.cone.is_pointed(1e-10) == Some(false) {
                    return Err(OrbaError::Descriptor(
                        "order-unit norm needs a cone without lines".into(),
                    ));
                }
                for j in 0..dim {
                    if !self.is_dominated_by_multiple(unit, j)? {
                        return Err(OrbaError::Descriptor(format!(
                            "{unit:?} is not an order unit: basis vector {j} is not dominated"
                        )));
                    }
                }
            }
            NormSpec::InfSum(s) => {
                let ok = s.left_map.rows() == dim
                    && s.right_map.rows() == dim
                    && s.left_map.cols() == s.left.dim()
                    && s.right_map.cols() == s.right.dim();
                if !ok {
                    return Err(OrbaError::Descriptor("inf-sum maps have the wrong shape".into()));
                }
            }
            NormSpec::Quotient(q) => {
                if q.map.rows() != dim || q.map.cols() != q.source.dim() {
                    return Err(OrbaError::Descriptor("quotient map has the wrong shape".into()));
                }
            }
        }
        Ok(())
    }

    /// Is there `s >= 0` with `-s a ⪯ e_j ⪯ s a`?
    fn is_dominated_by_multiple(&self, a: &[f64], j: usize) -> Result<bool> {
        let mut b = LpBuilder::new();
        let s = LinExpr::from(b.nonneg_var());
        let upper: Vec<LinExpr> = (0..self.dim)
            .map(|i| s.clone() * a[i] - LinExpr::constant(if i == j { 1.0 } else { 0.0 }))
            .collect();
        let lower: Vec<LinExpr> = (0..self.dim)
            .map(|i| s.clone() * a[i] + LinExpr::constant(if i == j { 1.0 } else { 0.0 }))
            .collect();
        self.cone.encode(&mut b, &upper);
        self.cone.encode(&mut b, &lower);
        Ok(b.feasible_point()?.is_some())
    }

    /// Positive `p, q` with `e_j = p - q`, if they exist.
    pub fn generating_witness(&self, j: usize) -> Result<Option<(Vector, Vector)>> {
        let mut b = LpBuilder::new();
        let p = b.free_vector(self.dim);
        let q: Vec<LinExpr> = p
            .iter()
            .enumerate()
            .map(|(i, pi)| pi.clone() - LinExpr::constant(if i == j { 1.0 } else { 0.0 }))
            .collect();
        self.cone.encode(&mut b, &p);
        self.cone.encode(&mut b, &q);
        // keep the witness bounded so the program has an optimum
        let mut obj = LinExpr::default();
        for pi in &p {
            obj = obj + b.abs_bound(pi);
        }
        let sol = b.minimize(&obj)?;
        if sol.status != LpStatus::Optimal {
            return Ok(None);
        }
        let pv = sol.values(&p);
        let qv = sol.values(&q);
        Ok(Some((
            Vector {
                space: self.id.clone(),
                coords: pv,
            },
            Vector {
                space: self.id.clone(),
                coords: qv,
            },
        )))
    }

    /// `x ∈ cone` within the space's cone tolerance.
    pub fn cone_contains(&self, x: &Vector) -> Result<bool> {
        self.check_carrier(x)?;
        self.cone.contains(&x.coords, self.tol.cone)
    }

    /// `x ⪯ y`, i.e. `y - x` lies in the cone.
    pub fn leq(&self, x: &Vector, y: &Vector) -> Result<bool> {
        self.check_carrier(x)?;
        self.check_carrier(y)?;
        self.cone_contains(&y.sub(x)?)
    }

    /// `-a ⪯ x ⪯ a`
    pub fn sandwiched(&self, x: &Vector, a: &Vector) -> Result<bool> {
        Ok(self.leq(&a.neg(), x)? && self.leq(x, a)?)
    }

    pub fn norm(&self, x: &Vector) -> Result<f64> {
        self.check_carrier(x)?;
        self.norm_coords(&x.coords)
    }

    pub(crate) fn norm_coords(&self, x: &[f64]) -> Result<f64> {
        if let Some(v) = self.norm.eval_direct(x) {
            return Ok(v);
        }
        if let NormSpec::OrderUnit { unit } = &self.norm {
            if let Some(a) = self.cone.simplicial_matrix() {
                // -s Au <= Ax <= s Au coordinatewise
                let au = a.mul_vec(unit);
                let ax = a.mul_vec(x);
                return Ok(ax.iter().zip(&au).map(|(p, q)| p.abs() / q).fold(0.0, f64::max));
            }
        }
        if x.iter().all(|v| *v == 0.0) {
            return Ok(0.0);
        }
        let mut b = LpBuilder::new();
        let z: Vec<LinExpr> = x.iter().map(|v| LinExpr::constant(*v)).collect();
        let t = self.encode_norm(&mut b, &z);
        match solve_min(&b, &t, self.tol.lp)? {
            Some(sol) => Ok(sol.objective.max(0.0)),
            None => Err(OrbaError::NotInSpace(format!(
                "no decomposition of {x:?} for the {} norm of `{}`",
                self.norm.name(),
                self.id
            ))),
        }
    }

    /// Adds constraints and returns an expression `t` with `t >= ‖z‖` for every
    /// feasible completion; minimizing `t` (with positive weight) makes it tight.
    pub fn encode_norm(&self, b: &mut LpBuilder, z: &[LinExpr]) -> LinExpr {
        match &self.norm {
            NormSpec::WeightedL1 { weights } => {
                let mut t = LinExpr::default();
                for (w, zi) in weights.iter().zip(z) {
                    t.add_scaled(&b.abs_bound(zi), *w);
                }
                t
            }
            NormSpec::Sup => {
                let t = LinExpr::from(b.nonneg_var());
                for zi in z {
                    b.ge_zero(t.clone() - zi.clone());
                    b.ge_zero(t.clone() + zi.clone());
                }
                t
            }
            NormSpec::OrderUnit { unit } => {
                let s = LinExpr::from(b.nonneg_var());
                let upper: Vec<LinExpr> = unit
                    .iter()
                    .zip(z)
                    .map(|(a, zi)| s.clone() * *a - zi.clone())
                    .collect();
                let lower: Vec<LinExpr> = unit
                    .iter()
                    .zip(z)
                    .map(|(a, zi)| s.clone() * *a + zi.clone())
                    .collect();
                self.cone.encode(b, &upper);
                self.cone.encode(b, &lower);
                s
            }
            NormSpec::InfSum(s) => {
                let x = b.free_vector(s.left.dim());
                let y = b.free_vector(s.right.dim());
                for (i, zi) in z.iter().enumerate() {
                    let sum = LinExpr::combination(s.left_map.row(i), &x)
                        + LinExpr::combination(s.right_map.row(i), &y);
                    b.eq_zero(sum - zi.clone());
                }
                let tx = s.left.encode_norm(b, &x);
                let ty = s.right.encode_norm(b, &y);
                tx + ty
            }
            NormSpec::Quotient(q) => {
                let x = b.free_vector(q.source.dim());
                for (i, zi) in z.iter().enumerate() {
                    b.eq_zero(LinExpr::combination(q.map.row(i), &x) - zi.clone());
                }
                q.source.encode_norm(b, &x)
            }
        }
    }

    /// Functionals `α_i` with `x ⪯ y ⟺ α_i(x) <= α_i(y)` for all `i`.
    ///
    /// Only simplicial cones are supported; their dual cone is generated by
    /// the rows of the (square, invertible) inequality matrix.
    pub fn dual_generators(&self) -> Result<Vec<Vec<f64>>> {
        match &self.cone {
            ConeSpec::Orthant { dim } => Ok((0..*dim)
                .map(|i| {
                    let mut r = vec![0.0; *dim];
                    r[i] = 1.0;
                    r
                })
                .collect()),
            ConeSpec::TransformedOrthant { matrix } => {
                Ok((0..matrix.rows()).map(|i| matrix.row(i).to_vec()).collect())
            }
            ConeSpec::Polyhedral { matrix } => match self.cone.simplicial_matrix() {
                Some(_) => Ok((0..matrix.rows()).map(|i| matrix.row(i).to_vec()).collect()),
                None => Err(OrbaError::Capability(format!(
                    "dual generators of a non-simplicial polyhedral cone ({}x{})",
                    matrix.rows(),
                    matrix.cols()
                ))),
            },
            ConeSpec::Sum { .. } => Err(OrbaError::Capability(
                "dual generators of a generated (sum) cone".into(),
            )),
        }
    }

    /// Ambient coordinates of `x`; the identity when the space has no embedding.
    pub fn to_ambient(&self, x: &Vector) -> Result<Vec<f64>> {
        self.check_carrier(x)?;
        Ok(match &self.embedding {
            Some(e) => e.mul_vec(&x.coords),
            None => x.coords.clone(),
        })
    }

    /// Inverse of [`to_ambient`](Self::to_ambient) on the image of the embedding.
    pub fn from_ambient(&self, v: &[f64]) -> Result<Vector> {
        let coords = match &self.embedding {
            Some(e) => e.coordinates_of(v, self.tol.num).ok_or_else(|| {
                OrbaError::NotInSpace(format!("{v:?} is outside the span of `{}`", self.id))
            })?,
            None => v.to_vec(),
        };
        Vector::new(self, coords)
    }

    pub fn ambient_dim(&self) -> usize {
        self.embedding.as_ref().map_or(self.dim, Matrix::rows)
    }
}

/// Minimizes `objective`; `None` when infeasible. Unbounded programs and
/// residuals above `tol` are errors since every infimum here is attained.
pub fn solve_min(
    b: &LpBuilder,
    objective: &LinExpr,
    tol: f64,
) -> Result<Option<ModelSolution>> {
    let sol = b.minimize(objective)?;
    match sol.status {
        LpStatus::Infeasible => Ok(None),
        LpStatus::Unbounded => Err(OrbaError::Consistency(
            "norm program is unbounded below".into(),
        )),
        LpStatus::Optimal => {
            let scale = 1.0 + sol.point.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if sol.residual > tol * scale {
                return Err(OrbaError::Consistency(format!(
                    "LP residual {:e} exceeds tolerance {:e}",
                    sol.residual, tol
                )));
            }
            Ok(Some(sol))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orthant(dim: usize) -> ConeSpec {
        ConeSpec::Orthant { dim }
    }

    #[test]
    fn leq_examples() {
        let s = OrderedSpace::weighted_l1_lattice("l", vec![1.0, 1.0]).unwrap();
        let v = |c: Vec<f64>| s.vector(c).unwrap();
        assert!(s.leq(&v(vec![0.0, 0.0]), &v(vec![1.0, 1.0])).unwrap());
        assert!(!s.leq(&v(vec![1.0, 0.0]), &v(vec![0.0, 1.0])).unwrap());

        let d = OrderedSpace::partial_sum_space("ps", 4).unwrap();
        let a = d.vector(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let x = d.vector(vec![1.0, -1.0, 1.0, -1.0]).unwrap();
        assert!(d.cone_contains(&x).unwrap());
        assert!(d.sandwiched(&x, &a).unwrap());
    }

    #[test]
    fn carrier_mismatch_is_an_error() {
        let s = OrderedSpace::weighted_l1_lattice("l", vec![1.0, 1.0]).unwrap();
        let t = OrderedSpace::weighted_l1_lattice("m", vec![1.0, 1.0]).unwrap();
        let x = t.vector(vec![1.0, 1.0]).unwrap();
        assert!(matches!(s.cone_contains(&x), Err(OrbaError::Carrier { .. })));
        assert!(s.vector(vec![1.0]).is_err());
    }

    #[test]
    fn order_unit_norm_by_lp() {
        let s = OrderedSpace::new(
            "ou",
            orthant(2),
            NormSpec::OrderUnit {
                unit: vec![1.0, 1.0],
            },
        )
        .unwrap();
        let x = s.vector(vec![1.0, -1.0]).unwrap();
        assert!((s.norm(&x).unwrap() - 1.0).abs() < 1e-9);
        let y = s.vector(vec![0.5, -3.0]).unwrap();
        assert!((s.norm(&y).unwrap() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn order_unit_must_dominate_the_basis() {
        let err = OrderedSpace::new(
            "bad",
            orthant(2),
            NormSpec::OrderUnit {
                unit: vec![1.0, 0.0],
            },
        );
        assert!(matches!(err, Err(OrbaError::Descriptor(_))));
    }

    #[test]
    fn weights_must_be_positive() {
        let err = OrderedSpace::weighted_l1_lattice("w", vec![1.0, 0.0]);
        assert!(matches!(err, Err(OrbaError::Descriptor(_))));
    }

    #[test]
    fn non_generating_cone_is_rejected_unless_flagged() {
        // the half-line {x1 >= 0, x1 <= 0, x2 >= 0} = {0} x R+ is not generating in R^2
        let cone = ConeSpec::Polyhedral {
            matrix: Matrix::from_rows(&[vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]]).unwrap(),
        };
        let norm = NormSpec::Sup;
        assert!(matches!(
            OrderedSpace::new("ray", cone.clone(), norm.clone()),
            Err(OrbaError::NotDirected(_))
        ));
        let s = OrderedSpace::builder("ray", cone, norm)
            .allow_non_directed()
            .build()
            .unwrap();
        assert!(!s.is_directed());
        assert!(s.generating_witness(0).unwrap().is_none());
    }

    #[test]
    fn generating_witnesses_reconstruct_basis_vectors() {
        let d = OrderedSpace::partial_sum_space("ps", 5).unwrap();
        for j in 0..5 {
            let (p, q) = d.generating_witness(j).unwrap().unwrap();
            assert!(d.cone_contains(&p).unwrap() && d.cone_contains(&q).unwrap());
            let e = p.sub(&q).unwrap();
            assert!(e.max_abs_diff(&d.basis_vector(j)) < 1e-9);
        }
    }

    #[test]
    fn dual_generators_by_variant() {
        let s = OrderedSpace::weighted_l1_lattice("l", vec![1.0, 1.0]).unwrap();
        assert_eq!(
            s.dual_generators().unwrap(),
            vec![vec![1.0, 0.0], vec![0.0, 1.0]]
        );
        let d = OrderedSpace::partial_sum_space("ps", 3).unwrap();
        assert_eq!(d.dual_generators().unwrap()[2], vec![1.0, 1.0, 1.0]);
        let wide = OrderedSpace::new(
            "wide",
            ConeSpec::Polyhedral {
                matrix: Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]])
                    .unwrap(),
            },
            NormSpec::Sup,
        )
        .unwrap();
        assert!(matches!(
            wide.dual_generators(),
            Err(OrbaError::Capability(_))
        ));
    }
}
