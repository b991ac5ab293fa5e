//! Banach covers: families of normed subspaces in which a function can be
//! integrated, closed under joins.
//!
//! Three families are provided. Ordered subspaces of an ambient ordered
//! coordinate space are order-unit spans of dominated vectors, joined by the
//! sum construction. Principal ideals `E_u` of a coordinate lattice are normed
//! by `‖x‖_u = max |x_i| / u_i` and joined by `u + v`. Köthe members are
//! weighted L1 spaces over an atomic measure `ν`, joined by `w ∧ v`.
//!
//! Member registries are append-only and necessarily partial: members are
//! created on demand rather than enumerated.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::bochner::bochner_integral;
use crate::cone_analysis::min_dominator;
use crate::error::{OrbaError, Result};
use crate::linalg::max_abs;
use crate::measure::IntegrableFunction;
use crate::space::{
    order_unit_span, sum_space, ConeSpec, NormSpec, OrderedSpace, SpaceDescriptor, SumEmbedding,
    Vector,
};

/// Added to every coordinate of a principal-ideal unit so that `u > 0` strictly.
pub const UNIT_DELTA: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MemberId(pub usize);

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum MemberData {
    Subspace,
    Unit(Vec<f64>),
    Weight(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct Member {
    pub id: MemberId,
    pub space: Arc<OrderedSpace>,
    pub data: MemberData,
    /// Set for members created by [`Cover::join`].
    pub parents: Option<(MemberId, MemberId)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoverKind {
    OrderedSubspaces,
    PrincipalIdeals,
    KoetheWeights { nu: Vec<f64>, reference: Vec<f64> },
}

#[derive(Debug, Default)]
struct Registry {
    members: Vec<Arc<Member>>,
    joins: HashMap<(MemberId, MemberId), MemberId>,
}

#[derive(Debug)]
pub struct Cover {
    kind: CoverKind,
    ambient: Arc<OrderedSpace>,
    registry: RwLock<Registry>,
}

/// The three integrals compared by [`Cover::u_integral`], in ambient coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverIntegral {
    pub value: Vec<f64>,
    pub member: MemberId,
    pub alternative: MemberId,
    pub join: MemberId,
    pub in_member: Vec<f64>,
    pub in_alternative: Vec<f64>,
    pub in_join: Vec<f64>,
    pub max_deviation: f64,
}

fn positive_vector(what: &str, v: &[f64]) -> Result<()> {
    match v.iter().position(|x| !(x.is_finite() && *x > 0.0)) {
        Some(i) => Err(OrbaError::Argument(format!(
            "{what} must be positive, entry {i} is {}",
            v[i]
        ))),
        None => Ok(()),
    }
}

fn same_len(context: &'static str, a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() == b.len() {
        Ok(())
    } else {
        Err(OrbaError::Dimension {
            context,
            expected: a.len(),
            found: b.len(),
        })
    }
}

/// Default reference weight `u_i = 2^{-i}`.
pub fn dyadic_reference(n: usize) -> Vec<f64> {
    (0..n).map(|i| 0.5f64.powi(i as i32)).collect()
}

impl Cover {
    /// Ordered subspaces of `ambient`, which must be directed with an inequality-form cone.
    pub fn ordered_subspaces(ambient: Arc<OrderedSpace>) -> Result<Self> {
        if !ambient.is_directed() {
            return Err(OrbaError::NotDirected(ambient.id().to_string()));
        }
        let cover = Self::empty(CoverKind::OrderedSubspaces, ambient.clone());
        let (p, _) = ambient
            .generating_witness(0)?
            .ok_or_else(|| OrbaError::NotDirected(ambient.id().to_string()))?;
        cover.push_with(MemberData::Subspace, None, false, |name| {
            order_unit_span(name, p.coords(), &[], ambient.cone())
        })?;
        Ok(cover)
    }

    /// Principal ideals of the coordinate lattice `ℝ^dim`.
    pub fn principal_ideals(dim: usize) -> Result<Self> {
        let ambient = OrderedSpace::new("ambient", ConeSpec::Orthant { dim }, NormSpec::Sup)?;
        let cover = Self::empty(CoverKind::PrincipalIdeals, Arc::new(ambient));
        cover.register_unit(vec![1.0; dim])?;
        Ok(cover)
    }

    /// Köthe spaces over atoms with masses `nu`; `reference` defaults to `2^{-i}`.
    pub fn koethe_weights(nu: Vec<f64>, reference: Option<Vec<f64>>) -> Result<Self> {
        positive_vector("atom masses", &nu)?;
        let reference = reference.unwrap_or_else(|| dyadic_reference(nu.len()));
        same_len("reference weight", &nu, &reference)?;
        positive_vector("reference weight", &reference)?;
        let ambient = OrderedSpace::weighted_l1_lattice("ambient", nu.clone())?;
        let cover = Self::empty(
            CoverKind::KoetheWeights {
                nu,
                reference: reference.clone(),
            },
            Arc::new(ambient),
        );
        cover.register_weight(reference)?;
        Ok(cover)
    }

    fn empty(kind: CoverKind, ambient: Arc<OrderedSpace>) -> Self {
        Self {
            kind,
            ambient,
            registry: RwLock::new(Registry::default()),
        }
    }

    pub fn kind(&self) -> &CoverKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            CoverKind::OrderedSubspaces => "ordered_subspaces",
            CoverKind::PrincipalIdeals => "principal_ideals",
            CoverKind::KoetheWeights { .. } => "koethe_weights",
        }
    }

    pub fn ambient(&self) -> &Arc<OrderedSpace> {
        &self.ambient
    }

    fn read(&self) -> std::sync::RwLockReadGuard<'_, Registry> {
        self.registry.read().unwrap_or_else(|e| e.into_inner())
    }

    fn write(&self) -> std::sync::RwLockWriteGuard<'_, Registry> {
        self.registry.write().unwrap_or_else(|e| e.into_inner())
    }

    /// A consistent snapshot of the registered members.
    pub fn members(&self) -> Vec<Arc<Member>> {
        self.read().members.clone()
    }

    pub fn member(&self, id: MemberId) -> Result<Arc<Member>> {
        self.read()
            .members
            .get(id.0)
            .cloned()
            .ok_or(OrbaError::UnknownMember(id.0))
    }

    pub fn default_member(&self) -> MemberId {
        MemberId(0)
    }

    /// Builds and appends a member under the write lock, so names are unique
    /// and a member whose data equals `data` is reused instead of duplicated.
    fn push_with(
        &self,
        data: MemberData,
        parents: Option<(MemberId, MemberId)>,
        dedupe: bool,
        build: impl FnOnce(String) -> Result<OrderedSpace>,
    ) -> Result<MemberId> {
        let mut reg = self.write();
        if dedupe {
            if let Some(m) = reg.members.iter().find(|m| m.data == data) {
                return Ok(m.id);
            }
        }
        let id = MemberId(reg.members.len());
        let space = build(format!("{}.m{}", self.kind_name(), id.0))?;
        if space.ambient_dim() != self.ambient.dim() {
            return Err(OrbaError::Dimension {
                context: "cover member ambient dimension",
                expected: self.ambient.dim(),
                found: space.ambient_dim(),
            });
        }
        reg.members.push(Arc::new(Member {
            id,
            space: Arc::new(space),
            data,
            parents,
        }));
        Ok(id)
    }

    /// Registers an ordered subspace of the ambient space.
    pub fn register_subspace(&self, space: OrderedSpace) -> Result<MemberId> {
        if self.kind != CoverKind::OrderedSubspaces {
            return Err(OrbaError::Argument(format!(
                "cannot register a subspace in a {} cover",
                self.kind_name()
            )));
        }
        self.push_with(MemberData::Subspace, None, false, |_| Ok(space))
    }

    /// Registers `E_u`, reusing an existing member with the same unit.
    pub fn register_unit(&self, unit: Vec<f64>) -> Result<MemberId> {
        if self.kind != CoverKind::PrincipalIdeals {
            return Err(OrbaError::Argument(format!(
                "cannot register a unit in a {} cover",
                self.kind_name()
            )));
        }
        same_len("principal-ideal unit", &vec![0.0; self.ambient.dim()], &unit)?;
        self.push_with(MemberData::Unit(unit.clone()), None, true, |name| {
            principal_ideal_space(&name, &unit)
        })
    }

    /// Registers `L_{ρ_w}`, reusing an existing member with the same weight.
    pub fn register_weight(&self, weight: Vec<f64>) -> Result<MemberId> {
        let CoverKind::KoetheWeights { nu, .. } = &self.kind else {
            return Err(OrbaError::Argument(format!(
                "cannot register a weight in a {} cover",
                self.kind_name()
            )));
        };
        same_len("Köthe weight", nu, &weight)?;
        positive_vector("Köthe weight", &weight)?;
        let scaled: Vec<f64> = weight.iter().zip(nu).map(|(w, n)| w * n).collect();
        self.push_with(MemberData::Weight(weight), None, true, |name| {
            OrderedSpace::weighted_l1_lattice(name, scaled)
        })
    }

    /// Values of `f` in ambient coordinates.
    fn ambient_values(&self, f: &IntegrableFunction) -> Result<Vec<Vec<f64>>> {
        let carrier = f.carrier();
        if carrier.ambient_dim() != self.ambient.dim() {
            return Err(OrbaError::Dimension {
                context: "function values in cover ambient",
                expected: self.ambient.dim(),
                found: carrier.ambient_dim(),
            });
        }
        let values = f
            .values()
            .iter()
            .map(|v| carrier.to_ambient(v))
            .collect::<Result<Vec<_>>>()?;
        if values.iter().flatten().any(|x| !x.is_finite()) {
            return Err(OrbaError::Uncoverable("non-finite function value".into()));
        }
        Ok(values)
    }

    /// Member coordinates of the ambient values, or `None` if they leave the member.
    fn member_coords(member: &Member, values: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
        match &member.data {
            MemberData::Unit(u) => values
                .iter()
                .all(|v| principal_ideal_norm(u, v).is_ok())
                .then(|| values.to_vec()),
            MemberData::Weight(_) => Some(values.to_vec()),
            MemberData::Subspace => values
                .iter()
                .map(|v| member.space.from_ambient(v).ok().map(Vector::into_coords))
                .collect(),
        }
    }

    pub fn contains(&self, id: MemberId, f: &IntegrableFunction) -> Result<bool> {
        let values = self.ambient_values(f)?;
        Ok(Self::member_coords(&*self.member(id)?, &values).is_some())
    }

    /// A member containing every value of `f`.
    ///
    /// Principal ideals use `u = sup |f| + δ`, Köthe weights use
    /// `w = u_ref / (sup |f| + 1)`, and ordered subspaces reuse the first
    /// registered member that contains the values before spanning a new one
    /// by a common dominator. The zero function gets the default member.
    pub fn assign_member(&self, f: &IntegrableFunction) -> Result<MemberId> {
        let values = self.ambient_values(f)?;
        if values.iter().flatten().all(|x| *x == 0.0) {
            return Ok(self.default_member());
        }
        let sup = componentwise_sup_abs(&values, self.ambient.dim());
        match &self.kind {
            CoverKind::PrincipalIdeals => {
                self.register_unit(sup.iter().map(|s| s + UNIT_DELTA).collect())
            }
            CoverKind::KoetheWeights { reference, .. } => self.register_weight(
                reference
                    .iter()
                    .zip(&sup)
                    .map(|(u, s)| u / (s + 1.0))
                    .collect(),
            ),
            CoverKind::OrderedSubspaces => {
                for m in self.members() {
                    if Self::member_coords(&m, &values).is_some() {
                        return Ok(m.id);
                    }
                }
                let a = self.common_dominator(&values)?;
                self.span_member(&a, &values)
            }
        }
    }

    /// `a ∈ D⁺` with `-a ⪯ x ⪯ a` for every value: a sum of minimal dominators.
    fn common_dominator(&self, values: &[Vec<f64>]) -> Result<Vec<f64>> {
        let mut a = vec![0.0; self.ambient.dim()];
        for v in values {
            let x = self.ambient.vector(v.clone())?;
            if x.is_zero() {
                continue;
            }
            let d = min_dominator(&self.ambient, &x).map_err(|e| match e {
                OrbaError::NoDominator(msg) => OrbaError::Uncoverable(msg),
                other => other,
            })?;
            for (ai, di) in a.iter_mut().zip(d.a.coords()) {
                *ai += di;
            }
        }
        Ok(a)
    }

    fn span_member(&self, a: &[f64], values: &[Vec<f64>]) -> Result<MemberId> {
        let nonzero: Vec<Vec<f64>> = values
            .iter()
            .filter(|v| v.iter().any(|x| *x != 0.0))
            .cloned()
            .collect();
        self.push_with(MemberData::Subspace, None, false, |name| {
            order_unit_span(name, a, &nonzero, self.ambient.cone())
                .map_err(|e| OrbaError::Uncoverable(e.to_string()))
        })
    }

    /// A member containing both, with norm-decreasing inclusions checked on
    /// the basis of each factor.
    pub fn join(&self, a: MemberId, b: MemberId) -> Result<MemberId> {
        let (ma, mb) = (self.member(a)?, self.member(b)?);
        let key = (a.min(b), a.max(b));
        if let Some(j) = self.read().joins.get(&key) {
            return Ok(*j);
        }
        let j = match (&ma.data, &mb.data) {
            (MemberData::Unit(u), MemberData::Unit(v)) => {
                self.register_unit(u.iter().zip(v).map(|(x, y)| x + y).collect())?
            }
            (MemberData::Weight(w), MemberData::Weight(v)) => {
                self.register_weight(w.iter().zip(v).map(|(x, y)| x.min(*y)).collect())?
            }
            (MemberData::Subspace, MemberData::Subspace) => {
                let emb = SumEmbedding::from_spaces(&ma.space, &mb.space);
                self.push_with(MemberData::Subspace, Some(key), false, |name| {
                    sum_space(name, ma.space.clone(), mb.space.clone(), &emb)
                })?
            }
            _ => unreachable!("a cover holds members of one family"),
        };
        let mj = self.member(j)?;
        for m in [&ma, &mb] {
            check_inclusion(m, &mj)?;
        }
        self.write().joins.insert(key, j);
        Ok(j)
    }

    /// Integrates `f` in a member and returns the result in ambient coordinates.
    pub fn integrate_in(&self, id: MemberId, f: &IntegrableFunction) -> Result<Vec<f64>> {
        let member = self.member(id)?;
        let values = self.ambient_values(f)?;
        let coords = Self::member_coords(&member, &values).ok_or_else(|| {
            OrbaError::Uncoverable(format!("member {} does not contain the function", id.0))
        })?;
        let g = IntegrableFunction::from_coords(f.measure().clone(), member.space.clone(), coords)?;
        member.space.to_ambient(&bochner_integral(&g)?.value)
    }

    /// A second member containing `f`, distinct from `primary`.
    fn alternative(&self, primary: MemberId, f: &IntegrableFunction) -> Result<MemberId> {
        let values = self.ambient_values(f)?;
        for m in self.members() {
            if m.id != primary && Self::member_coords(&m, &values).is_some() {
                return Ok(m.id);
            }
        }
        let member = self.member(primary)?;
        match &member.data {
            MemberData::Unit(u) => self.register_unit(u.iter().map(|x| x + 1.0).collect()),
            MemberData::Weight(w) => self.register_weight(w.iter().map(|x| x / 2.0).collect()),
            MemberData::Subspace => {
                let a: Vec<f64> = self.common_dominator(&values)?.iter().map(|x| 2.0 * x).collect();
                self.span_member(&a, &values)
            }
        }
    }

    /// The cover integral of `f`, checked against a second member and the join of both.
    pub fn u_integral(&self, f: &IntegrableFunction) -> Result<CoverIntegral> {
        self.u_integral_in(self.assign_member(f)?, f)
    }

    /// Like [`u_integral`](Self::u_integral) with a caller-chosen primary member.
    pub fn u_integral_in(&self, member: MemberId, f: &IntegrableFunction) -> Result<CoverIntegral> {
        let alternative = self.alternative(member, f)?;
        let join = self.join(member, alternative)?;
        let in_member = self.integrate_in(member, f)?;
        let in_alternative = self.integrate_in(alternative, f)?;
        let in_join = self.integrate_in(join, f)?;
        let dev = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let max_deviation = dev(&in_member, &in_alternative)
            .max(dev(&in_member, &in_join))
            .max(dev(&in_alternative, &in_join));
        let tol = self.ambient.tolerances().num * (1.0 + max_abs(&in_member));
        if max_deviation > tol {
            return Err(OrbaError::Consistency(format!(
                "integrals in members {}, {} and their join {} differ by {max_deviation:e}",
                member.0, alternative.0, join.0
            )));
        }
        Ok(CoverIntegral {
            value: in_member.clone(),
            member,
            alternative,
            join,
            in_member,
            in_alternative,
            in_join,
            max_deviation,
        })
    }

    pub fn from_manifest(manifest: &CoverManifest) -> Result<Self> {
        match manifest {
            CoverManifest::OrderedSubspaces { ambient, members } => {
                let cover = Self::ordered_subspaces(Arc::new(ambient.build("ambient")?))?;
                for (i, d) in members.iter().enumerate() {
                    cover.register_subspace(d.build(&format!("member{i}"))?)?;
                }
                Ok(cover)
            }
            CoverManifest::PrincipalIdeals { dim, members } => {
                let cover = Self::principal_ideals(*dim)?;
                for u in members {
                    cover.register_unit(u.clone())?;
                }
                Ok(cover)
            }
            CoverManifest::KoetheWeights {
                nu,
                reference,
                members,
            } => {
                let cover = Self::koethe_weights(nu.clone(), reference.clone())?;
                for w in members {
                    cover.register_weight(w.clone())?;
                }
                Ok(cover)
            }
        }
    }
}

/// `‖x‖_join <= ‖x‖_member` on the member's basis vectors.
fn check_inclusion(member: &Member, join: &Member) -> Result<()> {
    let tol = member.space.tolerances().num;
    for j in 0..member.space.dim() {
        let e = member.space.basis_vector(j);
        let amb = member.space.to_ambient(&e)?;
        let inner = member.space.norm(&e)?;
        let outer = match (&member.data, &join.data) {
            (MemberData::Unit(_), MemberData::Unit(w)) => principal_ideal_norm(w, &amb)?,
            _ => join.space.norm(&join.space.from_ambient(&amb)?)?,
        };
        if outer > inner * (1.0 + tol) + tol {
            return Err(OrbaError::Bound(format!(
                "inclusion of member {} into {} is not norm decreasing: {outer} > {inner}",
                member.id.0, join.id.0
            )));
        }
    }
    Ok(())
}

fn componentwise_sup_abs(values: &[Vec<f64>], dim: usize) -> Vec<f64> {
    let mut sup = vec![0.0f64; dim];
    for v in values {
        for (s, x) in sup.iter_mut().zip(v) {
            *s = s.max(x.abs());
        }
    }
    sup
}

/// `E_u` as an ordered space: the orthant ordered by the unit `u`.
fn principal_ideal_space(id: &str, unit: &[f64]) -> Result<OrderedSpace> {
    if unit.iter().any(|x| !(x.is_finite() && *x >= 0.0)) || unit.iter().all(|x| *x == 0.0) {
        return Err(OrbaError::Argument(format!("invalid principal-ideal unit {unit:?}")));
    }
    if unit.iter().all(|x| *x > 0.0) {
        return OrderedSpace::new(
            id,
            ConeSpec::Orthant { dim: unit.len() },
            NormSpec::OrderUnit {
                unit: unit.to_vec(),
            },
        );
    }
    // A unit with zeros spans a coordinate subspace.
    let support: Vec<usize> = (0..unit.len()).filter(|&i| unit[i] > 0.0).collect();
    let cols: Vec<Vec<f64>> = support
        .iter()
        .map(|&i| {
            let mut e = vec![0.0; unit.len()];
            e[i] = 1.0;
            e
        })
        .collect();
    OrderedSpace::builder(
        id,
        ConeSpec::Orthant { dim: support.len() },
        NormSpec::OrderUnit {
            unit: support.iter().map(|&i| unit[i]).collect(),
        },
    )
    .embedding(crate::linalg::Matrix::from_columns(&cols)?)
    .build()
}

/// `‖f‖_u = min { λ : |f| <= λ u } = max_i |f_i| / u_i`.
pub fn principal_ideal_norm(u: &[f64], f: &[f64]) -> Result<f64> {
    same_len("principal-ideal element", u, f)?;
    let mut lambda = 0.0f64;
    for (i, (ui, fi)) in u.iter().zip(f).enumerate() {
        if *ui < 0.0 {
            return Err(OrbaError::Argument(format!("unit entry {i} is negative")));
        }
        if *ui == 0.0 {
            if *fi != 0.0 {
                return Err(OrbaError::NotInIdeal { index: i, value: *fi });
            }
            continue;
        }
        lambda = lambda.max(fi.abs() / ui);
    }
    Ok(lambda)
}

/// `ρ_w(f) = Σ |f_i| w_i ν_i`.
pub fn koethe_norm(w: &[f64], nu: &[f64], f: &[f64]) -> Result<f64> {
    same_len("Köthe weight", nu, w)?;
    same_len("Köthe function", nu, f)?;
    positive_vector("Köthe weight", w)?;
    positive_vector("atom masses", nu)?;
    Ok(w.iter().zip(nu).zip(f).map(|((w, n), f)| f.abs() * w * n).sum())
}

/// `inf { ρ_{w1}(g) + ρ_{w2}(h) : g, h >= 0, g + h >= |f| }`, which is `ρ_{w1 ∧ w2}(f)`.
pub fn merged_norm(w1: &[f64], w2: &[f64], nu: &[f64], f: &[f64]) -> Result<f64> {
    same_len("Köthe weight", w1, w2)?;
    let w: Vec<f64> = w1.iter().zip(w2).map(|(a, b)| a.min(*b)).collect();
    koethe_norm(&w, nu, f)
}

/// Function norms on an atomic measure space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionNorm {
    WeightedL1Koethe { w: Vec<f64>, nu: Vec<f64> },
    Merged { left: Box<FunctionNorm>, right: Box<FunctionNorm> },
}

impl FunctionNorm {
    pub fn eval(&self, f: &[f64]) -> Result<f64> {
        match self {
            FunctionNorm::WeightedL1Koethe { w, nu } => koethe_norm(w, nu, f),
            FunctionNorm::Merged { left, right } => match (&**left, &**right) {
                (
                    FunctionNorm::WeightedL1Koethe { w: w1, nu: n1 },
                    FunctionNorm::WeightedL1Koethe { w: w2, nu: n2 },
                ) if n1 == n2 => merged_norm(w1, w2, n1, f),
                (l, r) => merged_norm_grid(l, r, f, GridConfig::default()),
            },
        }
    }
}

/// Resolution of the brute-force merged-norm search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    /// Relative grid step of the final sweep, as a fraction of `|f_i|`.
    pub step: f64,
    /// Points per atom in the initial joint grid.
    pub coarse: usize,
    /// Extra sweeps after reaching `step`, each ten times finer.
    pub refinements: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            step: 1e-3,
            coarse: 11,
            refinements: 6,
        }
    }
}

/// Brute-force merged norm: searches splits `g = t |f|`, `h = (1 - t) |f|`
/// with `t ∈ [0, 1]^n`. Monotone norms never prefer `g + h > |f|`, so the
/// search is over this face only. A joint coarse grid is followed by
/// coordinate sweeps that shrink the step to `cfg.step` and then refine.
pub fn merged_norm_grid(
    rho1: &FunctionNorm,
    rho2: &FunctionNorm,
    f: &[f64],
    cfg: GridConfig,
) -> Result<f64> {
    let n = f.len();
    let abs: Vec<f64> = f.iter().map(|x| x.abs()).collect();
    let cost = |t: &[f64]| -> Result<f64> {
        let g: Vec<f64> = t.iter().zip(&abs).map(|(t, a)| t * a).collect();
        let h: Vec<f64> = t.iter().zip(&abs).map(|(t, a)| (1.0 - t) * a).collect();
        Ok(rho1.eval(&g)? + rho2.eval(&h)?)
    };
    let coarse = cfg.coarse.max(2);
    let levels: Vec<f64> = (0..coarse).map(|k| k as f64 / (coarse - 1) as f64).collect();
    let total = coarse.checked_pow(n as u32).filter(|&c| c <= 1 << 20).ok_or_else(|| {
        OrbaError::Argument(format!("grid of {coarse}^{n} points is too large"))
    })?;
    let mut best_t = vec![0.0; n];
    let mut best = f64::INFINITY;
    let mut t = vec![0.0; n];
    for idx in 0..total {
        let mut r = idx;
        for ti in t.iter_mut() {
            *ti = levels[r % coarse];
            r /= coarse;
        }
        let c = cost(&t)?;
        if c < best {
            best = c;
            best_t.clone_from(&t);
        }
    }
    let mut step = 1.0 / (coarse - 1) as f64;
    let finest = cfg.step * 0.1f64.powi(cfg.refinements as i32);
    while step > finest {
        step = (step / 2.0).max(finest);
        let mut improved = true;
        while improved {
            improved = false;
            for i in 0..n {
                for dir in [-1.0, 1.0] {
                    let mut cand = best_t.clone();
                    cand[i] = (cand[i] + dir * step).clamp(0.0, 1.0);
                    let c = cost(&cand)?;
                    if c < best - 1e-15 * best.abs() {
                        best = c;
                        best_t = cand;
                        improved = true;
                    }
                }
            }
        }
    }
    Ok(best)
}

/// JSON cover manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoverManifest {
    OrderedSubspaces {
        ambient: SpaceDescriptor,
        #[serde(default)]
        members: Vec<SpaceDescriptor>,
    },
    PrincipalIdeals {
        dim: usize,
        /// Units of pre-registered members.
        #[serde(default)]
        members: Vec<Vec<f64>>,
    },
    KoetheWeights {
        nu: Vec<f64>,
        #[serde(default)]
        reference: Option<Vec<f64>>,
        /// Weights of pre-registered members.
        #[serde(default)]
        members: Vec<Vec<f64>>,
    },
}
