//! Bochner integrals on atomic measure spaces and constructive dominating functions.
//!
//! On an atomic space the integral is an absolutely convergent sum, so the
//! value itself is just a weighted sum. The approximating-sequence machinery is
//! kept anyway: [`approximate`] produces simple approximants under two
//! different schemes whose elementary integrals must converge to the same limit.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::cone_analysis::{min_dominator, DominatingConstant};
use crate::error::{OrbaError, Result};
use crate::linalg::Matrix;
use crate::measure::{l1_norm, phi_integral, weighted_sum, IntegrableFunction, MeasureKind};
use crate::space::construct::is_order_preserving;
use crate::space::{OrderedSpace, Vector};

/// An integral together with a bound on the error from the uncertified tail.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Integral {
    pub value: Vector,
    pub error_bound: f64,
}

pub fn bochner_integral(f: &IntegrableFunction) -> Result<Integral> {
    if f.values().iter().flat_map(Vector::coords).any(|v| !v.is_finite()) {
        return Err(OrbaError::NotIntegrable("non-finite function value".into()));
    }
    let norm = l1_norm(f)?;
    if !norm.upper().is_finite() {
        return Err(OrbaError::NotIntegrable(format!(
            "∫‖f‖ is unbounded ({} ± {})",
            norm.value, norm.uncertainty
        )));
    }
    Ok(Integral {
        value: weighted_sum(f),
        error_bound: f.tail_bound(),
    })
}

/// Ways to approximate an integrable function by simple functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ApproxScheme {
    /// Keep the first `k` atoms.
    Truncation,
    /// Round every coordinate down to the grid `2^-k ℤ`.
    DyadicRounding,
}

/// The `k`-th simple approximant of `f` under `scheme`.
pub fn approximate(f: &IntegrableFunction, scheme: ApproxScheme, k: usize) -> Result<IntegrableFunction> {
    match scheme {
        ApproxScheme::Truncation => Ok(f.truncate(k)),
        ApproxScheme::DyadicRounding => {
            let step = 0.5f64.powi(k.min(1000) as i32);
            let carrier = f.carrier().clone();
            let rounded = f.map_values(carrier.clone(), |v| {
                carrier.vector(v.coords().iter().map(|x| (x / step).floor() * step).collect())
            })?;
            // Rounding is exact on stored atoms; the tail is dropped.
            Ok(rounded.truncate(f.measure().len()))
        }
    }
}

/// Elementary integrals of the first `steps` approximants under `scheme`.
pub fn approximating_integrals(
    f: &IntegrableFunction,
    scheme: ApproxScheme,
    steps: usize,
) -> Result<Vec<Vector>> {
    (1..=steps)
        .map(|k| phi_integral(&approximate(f, scheme, k)?))
        .collect()
}

/// `∫ T∘f` computed atomwise, alongside `T(∫ f)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pushforward {
    pub value: Vector,
    pub mapped_integral: Vector,
    pub deviation: f64,
}

/// Integrates `T ∘ f` in `target`, where `map` sends carrier coordinates to
/// target coordinates and must be order preserving.
pub fn pushforward_integrate(
    map: &Matrix,
    f: &IntegrableFunction,
    target: Arc<OrderedSpace>,
) -> Result<Pushforward> {
    let source = f.carrier();
    if map.cols() != source.dim() || map.rows() != target.dim() {
        return Err(OrbaError::Dimension {
            context: "pushforward map",
            expected: source.dim() * target.dim(),
            found: map.rows() * map.cols(),
        });
    }
    if !is_order_preserving(source, map, target.cone())? {
        return Err(OrbaError::Order(format!(
            "map from `{}` to `{}` is not order preserving",
            source.id(),
            target.id()
        )));
    }
    let tf = f.map_values(target.clone(), |v| target.vector(map.mul_vec(v.coords())))?;
    let value = bochner_integral(&tf)?.value;
    let integral = bochner_integral(f)?.value;
    let mapped_integral = target.vector(map.mul_vec(integral.coords()))?;
    let deviation = value.max_abs_diff(&mapped_integral);
    let scale = 1.0 + crate::linalg::max_abs(value.coords());
    if deviation > target.tolerances().num * scale {
        return Err(OrbaError::Consistency(format!(
            "T(∫f) and ∫T∘f differ by {deviation:e}"
        )));
    }
    Ok(Pushforward {
        value,
        mapped_integral,
        deviation,
    })
}

/// A function `g` with `-g ⪯ f ⪯ g` at every atom and the bound it was checked against.
#[derive(Debug, Clone, PartialEq)]
pub struct DominatedPair {
    pub f: IntegrableFunction,
    pub g: IntegrableFunction,
    pub epsilon: f64,
    pub constant: DominatingConstant,
    /// `∫‖f‖` over the stored atoms.
    pub l1_f: f64,
    /// `∫‖g‖` over the stored atoms.
    pub l1_g: f64,
    /// The right-hand side `l1_g` was required not to exceed.
    pub bound: f64,
    pub stages: Vec<Stage>,
}

/// One block of the telescoping construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stage {
    /// Atoms `[start, end)` form the support of `f_k`.
    pub start: usize,
    pub end: usize,
    /// `∫‖f - s_k‖` including the certified tail.
    pub remainder: f64,
    pub l1_fk: f64,
    pub l1_gk: f64,
    pub budget: f64,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon.is_finite() && epsilon > 0.0 {
        Ok(())
    } else {
        Err(OrbaError::Argument(format!("epsilon must be positive, got {epsilon}")))
    }
}

fn value_key(v: &Vector) -> Vec<u64> {
    v.coords().iter().map(|x| (x + 0.0).to_bits()).collect()
}

/// Minimal dominators of a simple function, one LP per distinct value.
fn dominate_values(f: &IntegrableFunction) -> Result<IntegrableFunction> {
    let carrier = f.carrier();
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut distinct: Vec<&Vector> = Vec::new();
    let slots: Vec<usize> = f
        .values()
        .iter()
        .map(|v| {
            *index.entry(value_key(v)).or_insert_with(|| {
                distinct.push(v);
                distinct.len() - 1
            })
        })
        .collect();
    let doms: Vec<Vector> = distinct
        .par_iter()
        .map(|x| Ok(min_dominator(carrier, x)?.a))
        .collect::<Result<_>>()?;
    let values = slots.into_iter().map(|s| doms[s].clone()).collect();
    IntegrableFunction::new(f.measure().clone(), carrier.clone(), values)?.with_tail_bound(0.0)
}

fn check_sandwich(f: &IntegrableFunction, g: &IntegrableFunction) -> Result<()> {
    let carrier = f.carrier();
    for (i, (x, a)) in f.values().iter().zip(g.values()).enumerate() {
        if !carrier.sandwiched(x, a)? {
            return Err(OrbaError::Order(format!(
                "-g ⪯ f ⪯ g fails at atom {i}"
            )));
        }
    }
    Ok(())
}

/// Dominates a simple function: `-g ⪯ f ⪯ g` atomwise with
/// `∫‖g‖ <= C ∫‖f‖ + ε`. Each distinct value gets its own dominator, so `g`
/// is simple on the same partition.
pub fn simple_dominate(
    f: &IntegrableFunction,
    epsilon: f64,
    constant: DominatingConstant,
) -> Result<DominatedPair> {
    check_epsilon(epsilon)?;
    if !f.is_simple() {
        return Err(OrbaError::Argument(
            "simple_dominate needs a simple function; use bochner_dominate".into(),
        ));
    }
    let g = dominate_values(f)?;
    check_sandwich(f, &g)?;
    let l1_f = l1_norm(f)?.value;
    let l1_g = l1_norm(&g)?.value;
    let bound = constant.value() * l1_f + epsilon;
    if l1_g > bound * (1.0 + f.carrier().tolerances().num) {
        return Err(OrbaError::Bound(format!(
            "∫‖g‖ = {l1_g} exceeds C∫‖f‖ + ε = {bound} (C = {}); the sampled constant is too small",
            constant.value()
        )));
    }
    Ok(DominatedPair {
        f: f.clone(),
        g,
        epsilon,
        constant,
        l1_f,
        l1_g,
        bound,
        stages: Vec::new(),
    })
}

/// Dominates an integrable function on a truncated space by telescoping.
///
/// Stage `k` takes the shortest prefix `s_k` with `∫‖f - s_k‖ < ε 2^{-k-1}`
/// (counting the certified tail), dominates the block `f_k = s_k - s_{k-1}`
/// and checks `∫‖g_1‖ <= C(∫‖f‖ + ε/4)` and `∫‖g_k‖ <= C ε 2^{-k}` for
/// `k >= 2`. The result satisfies `∫‖g‖ <= C(∫‖f‖ + ε)`.
pub fn bochner_dominate(
    f: &IntegrableFunction,
    epsilon: f64,
    constant: DominatingConstant,
) -> Result<DominatedPair> {
    check_epsilon(epsilon)?;
    if let MeasureKind::Finite = f.measure().kind() {
        return simple_dominate(f, epsilon, constant);
    }
    let carrier = f.carrier().clone();
    let c = constant.value();
    let tail = f.tail_bound();
    let norms = f.pointwise_norms()?;
    let weighted: Vec<f64> = norms
        .iter()
        .enumerate()
        .map(|(i, n)| f.measure().weight(i) * n)
        .collect();
    let n = weighted.len();
    // suffix[m] = Σ_{i >= m} μ_i ‖f_i‖
    let mut suffix = vec![0.0; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + weighted[i];
    }
    let l1_f = suffix[0];

    let mut g_values = vec![Vector::zeros(&carrier); n];
    let mut stages = Vec::new();
    let mut start = 0usize;
    let mut k = 1i32;
    loop {
        let target = epsilon * 0.5f64.powi(k + 1);
        if tail >= target {
            return Err(OrbaError::Schedule(format!(
                "stage {k} needs ∫‖f - s_k‖ < ε·2^-{} = {target:e}, but the certified tail alone is {tail:e}; \
                 raise ε or certify a smaller tail",
                k + 1
            )));
        }
        let end = (start..=n)
            .find(|&m| suffix[m] + tail < target)
            .expect("the full prefix leaves only the tail");
        let block = f.truncate(end).sub(&f.truncate(start))?.with_tail_bound(0.0)?;
        let l1_fk = suffix[start] - suffix[end];
        let budget = if k == 1 {
            c * (l1_f + epsilon / 4.0)
        } else {
            c * epsilon * 0.5f64.powi(k)
        };
        let slack = (budget - c * l1_fk).max(f64::MIN_POSITIVE);
        let pair = simple_dominate(&block, slack, constant)?;
        if pair.l1_g > budget * (1.0 + carrier.tolerances().num) {
            return Err(OrbaError::Bound(format!(
                "stage {k}: ∫‖g_k‖ = {} exceeds its budget {budget}",
                pair.l1_g
            )));
        }
        for (i, slot) in g_values.iter_mut().enumerate().take(end).skip(start) {
            *slot = pair.g.value(i).clone();
        }
        stages.push(Stage {
            start,
            end,
            remainder: suffix[end] + tail,
            l1_fk,
            l1_gk: pair.l1_g,
            budget,
        });
        start = end;
        if suffix[end] == 0.0 {
            break;
        }
        k += 1;
    }

    // Beyond the stored atoms the tail of g is at most C times the tail of f.
    let g = IntegrableFunction::new(f.measure().clone(), carrier.clone(), g_values)?
        .with_tail_bound(c * tail)?;
    check_sandwich(f, &g)?;
    let l1_g = l1_norm(&g)?.value;
    let bound = c * (l1_f + tail + epsilon);
    if l1_g + c * tail > bound * (1.0 + carrier.tolerances().num) {
        return Err(OrbaError::Bound(format!(
            "∫‖g‖ = {l1_g} exceeds C(∫‖f‖ + ε) = {bound}"
        )));
    }
    Ok(DominatedPair {
        f: f.clone(),
        g,
        epsilon,
        constant,
        l1_f,
        l1_g,
        bound,
        stages,
    })
}

/// Outcome of comparing a candidate integral against the functional integrals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PettisReport {
    /// `max_α |α(I) - Σ μ_i α(f_i)|`
    pub max_deviation: f64,
    /// The unique vector whose functional values match, when the functionals separate points.
    pub solution: Option<Vec<f64>>,
    pub matches: bool,
}

/// Checks `candidate` against the dual generators of the carrier.
pub fn pettis_check(f: &IntegrableFunction, candidate: &Vector) -> Result<PettisReport> {
    let functionals = f.carrier().dual_generators()?;
    pettis_check_with(f, &functionals, candidate)
}

/// `α(I) = Σ μ_i α(f_i)` for every functional; with a square invertible family
/// the solution of that system is the only vector that can pass.
pub fn pettis_check_with(
    f: &IntegrableFunction,
    functionals: &[Vec<f64>],
    candidate: &Vector,
) -> Result<PettisReport> {
    let carrier = f.carrier();
    carrier.check_carrier(candidate)?;
    let dim = carrier.dim();
    if functionals.iter().any(|a| a.len() != dim) {
        return Err(OrbaError::Dimension {
            context: "dual functional",
            expected: dim,
            found: functionals.iter().map(Vec::len).find(|&l| l != dim).unwrap_or(0),
        });
    }
    let rhs: Vec<f64> = functionals
        .iter()
        .map(|a| {
            f.measure()
                .atoms()
                .iter()
                .zip(f.values())
                .map(|(atom, v)| atom.weight * crate::linalg::dot(a, v.coords()))
                .sum()
        })
        .collect();
    let max_deviation = functionals
        .iter()
        .zip(&rhs)
        .map(|(a, r)| (crate::linalg::dot(a, candidate.coords()) - r).abs())
        .fold(0.0, f64::max);
    let solution = if functionals.len() == dim && dim > 0 {
        Matrix::from_rows(functionals)?.solve(&rhs)
    } else {
        None
    };
    let scale = 1.0 + rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = carrier.tolerances().num * scale;
    let unique_ok = solution
        .as_ref()
        .is_none_or(|s| s.iter().zip(candidate.coords()).all(|(a, b)| (a - b).abs() <= tol));
    Ok(PettisReport {
        max_deviation,
        matches: max_deviation <= tol && unique_ok,
        solution,
    })
}
