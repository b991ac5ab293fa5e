//! Translations and convolutions on discrete groups.
//!
//! Two groups are supported: finite groups given by a Cayley table and the
//! integers observed through a window `[-R, R]`. On ℤ the compact sets of the
//! exhaustion are intervals `K_n = [-r_n, r_n]` for a chosen [`Chain`].
//!
//! [`weight_builder`] constructs a weight `w` with `|L_x f| <= u(x) w` for the
//! translates `(L_x f)(y) = f(x⁻¹ y)`, and [`convolve_via_integral`] integrates
//! `x ↦ L_x f` in the principal ideal of `w`, which must agree with the direct
//! sum `Σ μ(x) f(x⁻¹ y)`.

use std::sync::Arc;

use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::covers::{principal_ideal_norm, Cover, CoverIntegral};
use crate::error::{OrbaError, Result};
use crate::measure::{IntegrableFunction, MeasureSpace};

/// A finite group on `{0, …, n-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(try_from = "CayleyTable", into = "CayleyTable")]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, JsonSchema)]
struct CayleyTable {
    table: Vec<Vec<usize>>,
}

impl TryFrom<CayleyTable> for FiniteGroup {
    type Error = OrbaError;
    fn try_from(t: CayleyTable) -> Result<Self> {
        FiniteGroup::from_table(t.table)
    }
}

impl From<FiniteGroup> for CayleyTable {
    fn from(g: FiniteGroup) -> Self {
        CayleyTable { table: g.table }
    }
}

impl FiniteGroup {
    /// Validates closure, associativity (exhaustively), identity and inverses.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(OrbaError::Group("empty Cayley table".into()));
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(OrbaError::Group("Cayley table is not a closed n×n table".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| OrbaError::Group("no identity element".into()))?;
        let inverses = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| table[a][b] == identity && table[b][a] == identity)
                    .ok_or_else(|| OrbaError::Group(format!("element {a} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(OrbaError::Group(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            table,
            identity,
            inverses,
        })
    }

    /// `ℤ_n` under addition.
    pub fn cyclic(n: usize) -> Result<Self> {
        Self::from_table(
            (0..n)
                .map(|a| (0..n).map(|b| (a + b) % n).collect())
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }
}

/// Exhaustion of ℤ by intervals `K_n = [-r_n, r_n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum Chain {
    /// `r_n = n`.
    #[default]
    Linear,
    /// `r_0 = 0`, `r_n = 2^{n-1}`; satisfies `K_n + K_n ⊂ K_{n+1}`.
    Dyadic,
}

impl Chain {
    pub fn radius(self, n: u32) -> i64 {
        match self {
            Chain::Linear => n as i64,
            Chain::Dyadic if n == 0 => 0,
            Chain::Dyadic => 1i64.checked_shl(n - 1).unwrap_or(i64::MAX),
        }
    }

    /// Smallest `n >= 0` with `x ∈ K_n`.
    pub fn level(self, x: i64) -> u32 {
        let a = x.unsigned_abs();
        match self {
            Chain::Linear => a as u32,
            Chain::Dyadic if a == 0 => 0,
            Chain::Dyadic => a.next_power_of_two().trailing_zeros() + 1,
        }
    }

    /// Whether `K_n + K_n ⊂ K_{n+1}` for every `n` with `r_n <= radius`.
    pub fn product_axiom_holds(self, radius: i64) -> bool {
        (0..)
            .map(|n| (self.radius(n), self.radius(n + 1)))
            .take_while(|(r, _)| *r <= radius)
            .all(|(r, next)| 2 * r <= next)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Group {
    Finite(FiniteGroup),
    Integers {
        /// Window radius `R`; functions are compared on `[-R, R]`.
        window: i64,
        #[serde(default)]
        chain: Chain,
    },
}

/// `|f(n)| <= c (1 + |n|)^degree`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Growth {
    pub c: f64,
    pub degree: u32,
}

impl Growth {
    pub fn bound(&self, n: i64) -> f64 {
        self.c * (1.0 + n.unsigned_abs() as f64).powi(self.degree as i32)
    }
}

/// A real function on a group: stored values on `[lo, lo + len)` for ℤ, or
/// indexed by element for a finite group (with `lo = 0`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct GroupFunction {
    #[serde(default)]
    pub lo: i64,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<Growth>,
}

impl GroupFunction {
    /// Values `f(n)` for `n ∈ [lo, hi]`.
    pub fn from_fn(lo: i64, hi: i64, f: impl Fn(i64) -> f64) -> Self {
        Self {
            lo,
            values: (lo..=hi).map(f).collect(),
            growth: None,
        }
    }

    /// Attaches a growth bound, checking it against every stored value.
    pub fn with_growth(mut self, growth: Growth) -> Result<Self> {
        for (i, v) in self.values.iter().enumerate() {
            let n = self.lo + i as i64;
            if v.abs() > growth.bound(n) * (1.0 + 1e-12) {
                return Err(OrbaError::Argument(format!(
                    "growth bound {growth:?} fails at {n}: |f| = {}",
                    v.abs()
                )));
            }
        }
        self.growth = Some(growth);
        Ok(self)
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn get(&self, n: i64) -> Result<f64> {
        if n < self.lo || n > self.hi() {
            return Err(OrbaError::OutOfRange {
                point: n,
                lo: self.lo,
                hi: self.hi(),
            });
        }
        Ok(self.values[(n - self.lo) as usize])
    }

    /// An upper bound for `sup { |f(n)| : |n| <= r }`: exact when the interval
    /// is stored, otherwise completed by the growth bound.
    pub fn sup_abs_on(&self, r: i64) -> Result<f64> {
        let stored = (self.lo.max(-r)..=self.hi().min(r))
            .map(|n| self.values[(n - self.lo) as usize].abs())
            .fold(0.0, f64::max);
        if -r >= self.lo && r <= self.hi() {
            return Ok(stored);
        }
        let g = self.growth.ok_or(OrbaError::MissingGrowth { radius: r })?;
        Ok(stored.max(g.bound(r)))
    }

    fn check_finite(&self, g: &FiniteGroup) -> Result<()> {
        if self.values.len() != g.order() || self.lo != 0 {
            return Err(OrbaError::Dimension {
                context: "function on a finite group",
                expected: g.order(),
                found: self.values.len(),
            });
        }
        Ok(())
    }
}

/// A finitely supported measure `Σ μ_x δ_x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct FiniteMeasureOnGroup {
    /// `(element, mass)` pairs.
    pub support: Vec<(i64, f64)>,
}

impl FiniteMeasureOnGroup {
    pub fn dirac(x: i64) -> Self {
        Self {
            support: vec![(x, 1.0)],
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.support.iter().map(|(_, m)| m).sum()
    }
}

fn element(group: &FiniteGroup, x: i64) -> Result<usize> {
    usize::try_from(x)
        .ok()
        .filter(|&i| i < group.order())
        .ok_or_else(|| OrbaError::Group(format!("{x} is not an element of a group of order {}", group.order())))
}

impl Group {
    pub fn identity(&self) -> i64 {
        match self {
            Group::Finite(g) => g.identity() as i64,
            Group::Integers { .. } => 0,
        }
    }

    /// Points on which functions are compared: the whole finite group, or the window.
    pub fn window_points(&self) -> Vec<i64> {
        match self {
            Group::Finite(g) => (0..g.order() as i64).collect(),
            Group::Integers { window, .. } => (-window..=*window).collect(),
        }
    }

    pub fn mul(&self, a: i64, b: i64) -> Result<i64> {
        match self {
            Group::Finite(g) => Ok(g.mul(element(g, a)?, element(g, b)?) as i64),
            Group::Integers { .. } => a
                .checked_add(b)
                .ok_or_else(|| OrbaError::Group("integer overflow".into())),
        }
    }

    pub fn inverse(&self, a: i64) -> Result<i64> {
        match self {
            Group::Finite(g) => Ok(g.inverse(element(g, a)?) as i64),
            Group::Integers { .. } => Ok(-a),
        }
    }

    fn validate_measure(&self, mu: &FiniteMeasureOnGroup) -> Result<()> {
        for &(x, m) in &mu.support {
            if !(m.is_finite() && m >= 0.0) {
                return Err(OrbaError::Argument(format!("mass {m} at {x} is not a nonnegative number")));
            }
            match self {
                Group::Finite(g) => {
                    element(g, x)?;
                }
                Group::Integers { window, .. } => {
                    if x.abs() > *window {
                        return Err(OrbaError::OutOfRange {
                            point: x,
                            lo: -window,
                            hi: *window,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// `sup |f(K_n)|`; on a finite group every `K_n` with `n >= 1` is the whole group.
    fn sup_on_level(&self, f: &GroupFunction, n: u32) -> Result<f64> {
        match self {
            Group::Finite(_) => Ok(f.values.iter().fold(0.0, |m, v| m.max(v.abs()))),
            Group::Integers { chain, .. } => f.sup_abs_on(chain.radius(n)),
        }
    }

    /// Smallest `n >= 0` with `x ∈ K_n`; `K_0 = {e}`.
    fn level(&self, x: i64) -> u32 {
        match self {
            Group::Finite(g) => u32::from(x != g.identity() as i64),
            Group::Integers { chain, .. } => chain.level(x),
        }
    }
}

/// `(L_x f)(y) = f(x⁻¹ y)`.
pub fn translate(group: &Group, f: &GroupFunction, x: i64) -> Result<GroupFunction> {
    match group {
        Group::Finite(g) => {
            f.check_finite(g)?;
            let xi = g.inverse(element(g, x)?);
            Ok(GroupFunction {
                lo: 0,
                values: (0..g.order()).map(|y| f.values[g.mul(xi, y)]).collect(),
                growth: None,
            })
        }
        Group::Integers { .. } => Ok(GroupFunction {
            lo: f.lo + x,
            values: f.values.clone(),
            growth: f.growth.map(|gr| Growth {
                c: gr.c * (1.0 + x.unsigned_abs() as f64).powi(gr.degree as i32),
                degree: gr.degree,
            }),
        }),
    }
}

/// Values of `L_x f` on the comparison points of the group.
fn translate_on_window(group: &Group, f: &GroupFunction, x: i64) -> Result<Vec<f64>> {
    let xi = group.inverse(x)?;
    group
        .window_points()
        .into_iter()
        .map(|y| f.get(group.mul(xi, y)?))
        .collect()
}

/// The weight of the principal-ideal construction, tabulated on the window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightTable {
    pub points: Vec<i64>,
    /// `u(x) = 1 + sup |f(K_{[x]+1})|`
    pub u: Vec<f64>,
    /// `v(x) = [x] u(x)`
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    /// `α_n = n (1 + sup |f(K_{n+1})|)` for `n = 1, 2, …`
    pub alpha: Vec<f64>,
    /// Pairs `(x, y)` on which `|f(x⁻¹ y)| <= u(x) v(y)` was checked.
    pub checked_pairs: usize,
    /// `max |f(x⁻¹ y)| / (u(x) v(y))` over the checked pairs.
    pub max_step_ratio: f64,
    pub chain_product_axiom: bool,
}

impl WeightTable {
    fn index(&self, x: i64) -> Option<usize> {
        self.points.iter().position(|&p| p == x)
    }

    pub fn u_at(&self, x: i64) -> Option<f64> {
        self.index(x).map(|i| self.u[i])
    }
}

/// Builds `w = Σ_{n >= 0} α_{n+1} g_n` with `g_n` the indicator of the
/// complement of `K_{n-1}` (and `g_0 ≡ 1`), so `w(x) = Σ_{n=0}^{level(x)} α_{n+1}`.
/// Then `w >= v` pointwise and `|L_x f| <= u(x) v`; both are checked on the
/// window, the latter wherever `f(x⁻¹ y)` is stored.
pub fn weight_builder(group: &Group, f: &GroupFunction) -> Result<WeightTable> {
    if let Group::Finite(g) = group {
        f.check_finite(g)?;
    }
    let points = group.window_points();
    let max_level = points.iter().map(|&x| group.level(x)).max().unwrap_or(0);
    // sup |f(K_n)| for n = 0 ..= max_level + 2
    let sups = (0..=max_level + 2)
        .map(|n| group.sup_on_level(f, n))
        .collect::<Result<Vec<f64>>>()?;
    let alpha: Vec<f64> = (1..=max_level + 1)
        .map(|n| n as f64 * (1.0 + sups[n as usize + 1]))
        .collect();
    let mut u = Vec::with_capacity(points.len());
    let mut v = Vec::with_capacity(points.len());
    let mut w = Vec::with_capacity(points.len());
    for &x in &points {
        let level = group.level(x);
        let bracket = level.max(1);
        let ux = 1.0 + sups[bracket as usize + 1];
        u.push(ux);
        v.push(bracket as f64 * ux);
        w.push(alpha[..=level as usize].iter().sum::<f64>());
    }
    if let Some(i) = (0..points.len()).find(|&i| w[i] < v[i]) {
        return Err(OrbaError::Bound(format!(
            "w({}) = {} is below v = {}",
            points[i], w[i], v[i]
        )));
    }

    let rows: Vec<(usize, f64)> = points
        .par_iter()
        .enumerate()
        .map(|(ix, &x)| {
            let xi = group.inverse(x)?;
            let mut count = 0usize;
            let mut worst = 0.0f64;
            for (iy, &y) in points.iter().enumerate() {
                if let Ok(val) = f.get(group.mul(xi, y)?) {
                    count += 1;
                    worst = worst.max(val.abs() / (u[ix] * v[iy]));
                }
            }
            Ok((count, worst))
        })
        .collect::<Result<_>>()?;
    let checked_pairs = rows.iter().map(|r| r.0).sum();
    let max_step_ratio = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    if max_step_ratio > 1.0 + 1e-12 {
        return Err(OrbaError::Bound(format!(
            "|L_x f| <= u(x) v fails on the window (ratio {max_step_ratio})"
        )));
    }
    let chain_product_axiom = match group {
        Group::Finite(_) => true,
        Group::Integers { window, chain } => chain.product_axiom_holds(*window),
    };
    Ok(WeightTable {
        points,
        u,
        v,
        w,
        alpha,
        checked_pairs,
        max_step_ratio,
        chain_product_axiom,
    })
}

/// `(μ * f)(y) = Σ_x μ_x f(x⁻¹ y)` on the comparison points.
pub fn convolve_direct(
    group: &Group,
    mu: &FiniteMeasureOnGroup,
    f: &GroupFunction,
) -> Result<GroupFunction> {
    group.validate_measure(mu)?;
    if let Group::Finite(g) = group {
        f.check_finite(g)?;
    }
    let points = group.window_points();
    let translates = mu
        .support
        .iter()
        .filter(|(_, m)| *m > 0.0)
        .map(|&(x, m)| Ok((m, translate_on_window(group, f, x)?)))
        .collect::<Result<Vec<_>>>()?;
    let values = (0..points.len())
        .map(|i| {
            let mut acc = 0.0;
            for (m, t) in &translates {
                acc += m * t[i];
            }
            acc
        })
        .collect();
    Ok(GroupFunction {
        lo: points.first().copied().unwrap_or(0),
        values,
        growth: None,
    })
}

/// Result of [`convolve_via_integral`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralConvolution {
    pub result: GroupFunction,
    pub direct: GroupFunction,
    pub max_deviation: f64,
    /// `‖L_x f‖_w` for each supported `x`, next to the certificate `u(x)`.
    pub translate_norms: Vec<(i64, f64, f64)>,
    pub cover: Option<CoverIntegral>,
    pub weight: WeightTable,
}

/// Integrates `x ↦ L_x f` in the principal ideal of the constructed weight
/// and compares with [`convolve_direct`].
pub fn convolve_via_integral(
    group: &Group,
    mu: &FiniteMeasureOnGroup,
    f: &GroupFunction,
) -> Result<IntegralConvolution> {
    let direct = convolve_direct(group, mu, f)?;
    let weight = weight_builder(group, f)?;
    let points = &weight.points;
    let support: Vec<(i64, f64)> = mu.support.iter().copied().filter(|(_, m)| *m > 0.0).collect();

    let mut translate_norms = Vec::with_capacity(support.len());
    let mut rows = Vec::with_capacity(support.len());
    for &(x, _) in &support {
        let t = translate_on_window(group, f, x)?;
        let norm = principal_ideal_norm(&weight.w, &t)?;
        let ux = weight
            .u_at(x)
            .ok_or(OrbaError::OutOfRange { point: x, lo: points[0], hi: points[points.len() - 1] })?;
        if norm > ux * (1.0 + 1e-12) {
            return Err(OrbaError::Bound(format!(
                "‖L_{x} f‖_w = {norm} exceeds u({x}) = {ux}: the weight construction is wrong"
            )));
        }
        translate_norms.push((x, norm, ux));
        rows.push(t);
    }

    let (values, cover) = if support.is_empty() {
        (vec![0.0; points.len()], None)
    } else {
        let cover = Cover::principal_ideals(points.len())?;
        let member = cover.register_unit(weight.w.clone())?;
        let measure = Arc::new(MeasureSpace::finite(
            support.iter().map(|(x, m)| (x.to_string(), *m)),
        )?);
        let func = IntegrableFunction::from_coords(measure, cover.ambient().clone(), rows)?;
        let r = cover.u_integral_in(member, &func)?;
        (r.value.clone(), Some(r))
    };
    let result = GroupFunction {
        lo: direct.lo,
        values,
        growth: None,
    };
    let max_deviation = result
        .values
        .iter()
        .zip(&direct.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let scale = 1.0 + direct.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max_deviation > crate::tol::NUM * scale {
        return Err(OrbaError::Consistency(format!(
            "integral and direct convolution differ by {max_deviation:e}"
        )));
    }
    Ok(IntegralConvolution {
        result,
        direct,
        max_deviation,
        translate_norms,
        cover,
        weight,
    })
}

/// `‖L_x f - L_a f‖_w` for the given pairs: the discrete stand-in for
/// continuity of `x ↦ L_x f`, recorded as a table.
pub fn translation_modulus_table(
    group: &Group,
    f: &GroupFunction,
    weight: &WeightTable,
    pairs: &[(i64, i64)],
) -> Result<Vec<(i64, i64, f64)>> {
    pairs
        .iter()
        .map(|&(x, a)| {
            let tx = translate_on_window(group, f, x)?;
            let ta = translate_on_window(group, f, a)?;
            let d: Vec<f64> = tx.iter().zip(&ta).map(|(p, q)| p - q).collect();
            Ok((x, a, principal_ideal_norm(&weight.w, &d)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(window: i64) -> Group {
        Group::Integers {
            window,
            chain: Chain::Linear,
        }
    }

    fn identity_fn(r: i64) -> GroupFunction {
        GroupFunction::from_fn(-r, r, |n| n as f64)
            .with_growth(Growth { c: 1.0, degree: 1 })
            .unwrap()
    }

    #[test]
    fn cyclic_group_validates() {
        let g = FiniteGroup::cyclic(5).unwrap();
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inverse(2), 3);
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn translations() {
        let f = identity_fn(10);
        let t = translate(&z(3), &f, 2).unwrap();
        for y in -3..=3 {
            assert_eq!(t.get(y).unwrap(), (y - 2) as f64);
        }
        let g = Group::Finite(FiniteGroup::cyclic(5).unwrap());
        let ind = GroupFunction { lo: 0, values: vec![1.0, 0.0, 0.0, 0.0, 0.0], growth: None };
        assert_eq!(translate(&g, &ind, 1).unwrap().values, vec![0.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(translate(&g, &ind, 0).unwrap(), ind);
    }

    #[test]
    fn chains() {
        assert_eq!(Chain::Linear.level(-3), 3);
        assert_eq!(Chain::Dyadic.level(0), 0);
        assert_eq!(Chain::Dyadic.level(1), 1);
        assert_eq!(Chain::Dyadic.level(2), 2);
        assert_eq!(Chain::Dyadic.level(3), 3);
        assert_eq!(Chain::Dyadic.level(4), 3);
        assert_eq!(Chain::Dyadic.level(5), 4);
        assert!(Chain::Dyadic.product_axiom_holds(1 << 20));
        assert!(Chain::Linear.product_axiom_holds(1));
        assert!(!Chain::Linear.product_axiom_holds(2));
    }

    #[test]
    fn weights_for_the_identity_function() {
        let w = weight_builder(&z(4), &identity_fn(4)).unwrap();
        let at = |x: i64| w.points.iter().position(|&p| p == x).unwrap();
        assert_eq!(w.u[at(0)], 3.0);
        assert_eq!(w.v[at(0)], 3.0);
        assert_eq!(w.w[at(0)], 3.0);
        assert_eq!(w.alpha[1], 8.0);
        assert_eq!(w.w[at(1)], 11.0);
        assert_eq!(w.v[at(1)], 3.0);
        assert_eq!(w.u[at(2)] * w.v[at(3)], 60.0);
        assert!(w.max_step_ratio <= 1.0);
    }

    #[test]
    fn missing_growth_is_reported() {
        let f = GroupFunction::from_fn(-2, 2, |n| n as f64);
        assert!(matches!(
            weight_builder(&z(2), &f),
            Err(OrbaError::MissingGrowth { .. })
        ));
    }

    #[test]
    fn two_point_average() {
        let mu = FiniteMeasureOnGroup { support: vec![(0, 0.5), (1, 0.5)] };
        let f = identity_fn(12);
        let r = convolve_via_integral(&z(6), &mu, &f).unwrap();
        for (i, y) in (-6..=6).enumerate() {
            assert_eq!(r.direct.values[i], y as f64 - 0.5);
        }
        assert_eq!(r.max_deviation, 0.0);
    }

    #[test]
    fn dirac_convolution_on_z5() {
        let g = Group::Finite(FiniteGroup::cyclic(5).unwrap());
        let ind = GroupFunction { lo: 0, values: vec![1.0, 0.0, 0.0, 0.0, 0.0], growth: None };
        let r = convolve_via_integral(&g, &FiniteMeasureOnGroup::dirac(2), &ind).unwrap();
        assert_eq!(r.result.values, vec![0.0, 0.0, 1.0, 0.0, 0.0]);
        let e = convolve_direct(&g, &FiniteMeasureOnGroup::dirac(0), &ind).unwrap();
        assert_eq!(e, ind);
    }

    #[test]
    fn measure_outside_window_is_rejected() {
        let mu = FiniteMeasureOnGroup::dirac(9);
        assert!(matches!(
            convolve_direct(&z(3), &mu, &identity_fn(20)),
            Err(OrbaError::OutOfRange { .. })
        ));
    }

    #[test]
    fn modulus_table_is_symmetric() {
        let g = z(3);
        let f = identity_fn(8);
        let w = weight_builder(&g, &f).unwrap();
        let t = translation_modulus_table(&g, &f, &w, &[(0, 1), (1, 0), (2, 2)]).unwrap();
        assert_eq!(t[0].2, t[1].2);
        assert_eq!(t[2].2, 0.0);
    }
}
