//! Absolutely dominating norms.
//!
//! For `x` in a directed space the dominating norm
//! `N(x) = inf { ‖a‖ : a ∈ D⁺, -a ⪯ x ⪯ a }` is a linear program over `a`.
//! A norm is C-absolutely dominating when `N <= C ‖·‖`; the scans below
//! estimate the best such `C` from below by sampling, and the normality ratio
//! `sup ‖x‖ / N(x)` which is finite exactly when the cone is normal.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{OrbaError, Result};
use crate::lp::{LinExpr, LpBuilder};
use crate::space::{solve_min, NormSpec, OrderedSpace, Vector};
use crate::tol::RATIO_GUARD;

/// A minimal dominating element of a vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominatorResult {
    pub a: Vector,
    /// The minimized norm of `a`.
    pub value: f64,
    /// Largest violation of `a ∈ D⁺`, `-a ⪯ x ⪯ a` at the returned `a`.
    pub residual: f64,
}

/// `a ∈ D⁺`, `a - x ∈ D⁺`, `a + x ∈ D⁺` for affine `a` and constant `x`.
fn encode_domination(space: &OrderedSpace, b: &mut LpBuilder, a: &[LinExpr], x: &[LinExpr]) {
    let cone = space.cone();
    cone.encode(b, a);
    let upper: Vec<LinExpr> = a.iter().zip(x).map(|(ai, xi)| ai.clone() - xi.clone()).collect();
    let lower: Vec<LinExpr> = a.iter().zip(x).map(|(ai, xi)| ai.clone() + xi.clone()).collect();
    cone.encode(b, &upper);
    cone.encode(b, &lower);
}

fn domination_residual(space: &OrderedSpace, a: &[f64], x: &[f64]) -> f64 {
    let cone = space.cone();
    let upper: Vec<f64> = a.iter().zip(x).map(|(ai, xi)| ai - xi).collect();
    let lower: Vec<f64> = a.iter().zip(x).map(|(ai, xi)| ai + xi).collect();
    [a, &upper[..], &lower[..]]
        .iter()
        .filter_map(|v| cone.margin(v))
        .fold(0.0f64, |r, m| r.max(-m))
}

/// Minimizes `‖a‖` over `a ∈ D⁺` with `-a ⪯ x ⪯ a`; the value is `N(x)`.
pub fn min_dominator(space: &OrderedSpace, x: &Vector) -> Result<DominatorResult> {
    space.check_carrier(x)?;
    if x.is_zero() {
        return Ok(DominatorResult {
            a: Vector::zeros(space),
            value: 0.0,
            residual: 0.0,
        });
    }
    let mut b = LpBuilder::new();
    let a = b.free_vector(space.dim());
    let xc: Vec<LinExpr> = x.coords().iter().map(|v| LinExpr::constant(*v)).collect();
    encode_domination(space, &mut b, &a, &xc);
    let t = space.encode_norm(&mut b, &a);
    let tol = space.tolerances().lp;
    let sol = solve_min(&b, &t, tol)?.ok_or_else(|| {
        OrbaError::NoDominator(format!(
            "no a ∈ D⁺ with -a ⪯ x ⪯ a in `{}` (is the space directed?)",
            space.id()
        ))
    })?;
    let coords = sol.values(&a);
    let residual = domination_residual(space, &coords, x.coords());
    Ok(DominatorResult {
        a: space.vector(coords)?,
        value: sol.objective.max(0.0),
        residual,
    })
}

/// `N(x) = inf { ‖a‖ : a ∈ D⁺, -a ⪯ x ⪯ a }`.
pub fn n_norm(space: &OrderedSpace, x: &Vector) -> Result<f64> {
    Ok(min_dominator(space, x)?.value)
}

/// Sampling configuration for the ratio scans.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub samples: usize,
    pub seed: u64,
    /// Vectors evaluated in addition to the random samples and the basis.
    pub extra: Vec<Vector>,
}

impl ScanConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            extra: Vec::new(),
        }
    }

    pub fn with_extra(mut self, extra: Vec<Vector>) -> Self {
        self.extra = extra;
        self
    }
}

/// Seeded uniform samples from `[-1, 1]^dim`.
pub fn sample_vectors(space: &OrderedSpace, count: usize, seed: u64) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let coords = (0..space.dim()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            space.vector(coords).expect("dimension matches")
        })
        .collect()
}

/// Result of a joint dominating-ratio and normality-ratio scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub space: String,
    pub samples: usize,
    pub seed: u64,
    /// Sampled lower bound on the best dominating constant: `max N(x) / ‖x‖`.
    #[serde(rename = "C_lower")]
    pub c_lower: f64,
    pub c_witness: Vec<f64>,
    /// `max ‖x‖ / N(x)` over samples with `N(x) >= 1e-12`.
    pub normality_ratio: f64,
    pub witness: Vec<f64>,
    /// Number of vectors evaluated, including the basis and extra candidates.
    pub evaluated: usize,
    /// Set when the sampled constant is below one, which no closed cone allows.
    pub below_one: bool,
    /// Lattices and order-unit spaces are exactly 1-absolutely dominating.
    pub exact_constant: Option<f64>,
}

struct Sample {
    n: f64,
    norm: f64,
}

fn candidates(space: &OrderedSpace, cfg: &ScanConfig) -> Result<Vec<Vector>> {
    let mut out: Vec<Vector> = (0..space.dim()).map(|j| space.basis_vector(j)).collect();
    for e in &cfg.extra {
        space.check_carrier(e)?;
        out.push(e.clone());
    }
    out.extend(sample_vectors(space, cfg.samples, cfg.seed));
    Ok(out)
}

fn evaluate(space: &OrderedSpace, xs: &[Vector]) -> Result<Vec<Sample>> {
    xs.par_iter()
        .map(|x| {
            Ok(Sample {
                n: n_norm(space, x)?,
                norm: space.norm(x)?,
            })
        })
        .collect()
}

/// Index of the first maximum; ties resolve to the lowest index so that the
/// result does not depend on evaluation order.
fn argmax(values: impl Iterator<Item = Option<f64>>) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.enumerate() {
        if let Some(v) = v {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((i, v));
            }
        }
    }
    best
}

/// Samples both ratios in one pass.
pub fn scan(space: &OrderedSpace, cfg: &ScanConfig) -> Result<ScanReport> {
    if cfg.samples == 0 {
        return Err(OrbaError::Argument("sample_count must be positive".into()));
    }
    let xs = candidates(space, cfg)?;
    let evals = evaluate(space, &xs)?;
    let tol = space.tolerances().num;
    let dom = argmax(
        evals
            .iter()
            .map(|s| (s.norm > RATIO_GUARD).then(|| s.n / s.norm)),
    );
    let normal = argmax(
        evals
            .iter()
            .map(|s| (s.n >= RATIO_GUARD).then(|| s.norm / s.n)),
    );
    let (ci, c_lower) = dom.unwrap_or((0, 0.0));
    let (ni, ratio) = normal.unwrap_or((0, f64::INFINITY));
    let exact = (space.is_lattice_instance()
        || matches!(space.norm_spec(), NormSpec::OrderUnit { .. }))
    .then_some(1.0);
    Ok(ScanReport {
        space: space.id().to_string(),
        samples: cfg.samples,
        seed: cfg.seed,
        c_lower,
        c_witness: xs[ci].coords().to_vec(),
        normality_ratio: ratio,
        witness: xs[ni].coords().to_vec(),
        evaluated: xs.len(),
        below_one: c_lower < 1.0 - tol,
        exact_constant: exact,
    })
}

/// Sampled lower bound on the dominating constant and the vector attaining it.
pub fn dominating_ratio_scan(
    space: &OrderedSpace,
    sample_count: usize,
    seed: u64,
) -> Result<(f64, Vector)> {
    let r = scan(space, &ScanConfig::new(sample_count, seed))?;
    Ok((r.c_lower, space.vector(r.c_witness)?))
}

/// Sampled `sup ‖x‖ / N(x)`; divergence along a family certifies a non-normal cone.
pub fn normality_ratio_scan(
    space: &OrderedSpace,
    sample_count: usize,
    seed: u64,
) -> Result<(f64, Vector)> {
    let r = scan(space, &ScanConfig::new(sample_count, seed))?;
    Ok((r.normality_ratio, space.vector(r.witness)?))
}

/// The dominating constant used in quantitative bounds: a sampled lower bound
/// inflated by a safety factor, with both recorded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DominatingConstant {
    pub sampled: f64,
    pub safety_factor: f64,
}

impl DominatingConstant {
    pub const DEFAULT_SAFETY: f64 = 1.05;

    pub fn from_scan(report: &ScanReport) -> Self {
        Self {
            sampled: report.exact_constant.unwrap_or(report.c_lower).max(1.0),
            safety_factor: Self::DEFAULT_SAFETY,
        }
    }

    pub fn exact(c: f64) -> Self {
        Self {
            sampled: c,
            safety_factor: 1.0,
        }
    }

    pub fn value(&self) -> f64 {
        self.sampled * self.safety_factor
    }
}

/// The norm `ρ = ε N + ‖·‖` on a base space.
#[derive(Debug, Clone)]
pub struct RenormedSpace {
    base: Arc<OrderedSpace>,
    epsilon: f64,
}

/// `ρ(x)` split into its two addends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoValue {
    /// `ε N(x)`
    pub n_part: f64,
    /// `‖x‖`
    pub norm_part: f64,
    pub total: f64,
}

/// Result of a dominating-ratio scan under `ρ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RenormScan {
    pub epsilon: f64,
    pub samples: usize,
    pub seed: u64,
    /// `max inf{ρ(a)} / ρ(x)` over samples.
    pub ratio: f64,
    pub witness: Vec<f64>,
    /// `(1 + ε)²`
    pub bound: f64,
}

pub fn renorm_eps(space: Arc<OrderedSpace>, epsilon: f64) -> Result<RenormedSpace> {
    RenormedSpace::new(space, epsilon)
}

impl RenormedSpace {
    pub fn new(base: Arc<OrderedSpace>, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(OrbaError::Argument(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        Ok(Self { base, epsilon })
    }

    pub fn base(&self) -> &OrderedSpace {
        &self.base
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn rho(&self, x: &Vector) -> Result<RhoValue> {
        let n_part = self.epsilon * n_norm(&self.base, x)?;
        let norm_part = self.base.norm(x)?;
        Ok(RhoValue {
            n_part,
            norm_part,
            total: n_part + norm_part,
        })
    }

    /// Minimizes `ρ(a)` over dominating `a`. `N(a)` is itself an infimum over
    /// `b` dominating `a`, so both are optimized in one program.
    pub fn min_dominator(&self, x: &Vector) -> Result<DominatorResult> {
        let space = &*self.base;
        space.check_carrier(x)?;
        if x.is_zero() {
            return Ok(DominatorResult {
                a: Vector::zeros(space),
                value: 0.0,
                residual: 0.0,
            });
        }
        let mut b = LpBuilder::new();
        let a = b.free_vector(space.dim());
        let c = b.free_vector(space.dim());
        let xc: Vec<LinExpr> = x.coords().iter().map(|v| LinExpr::constant(*v)).collect();
        encode_domination(space, &mut b, &a, &xc);
        encode_domination(space, &mut b, &c, &a);
        let ta = space.encode_norm(&mut b, &a);
        let tc = space.encode_norm(&mut b, &c);
        let objective = ta + tc * self.epsilon;
        let sol = solve_min(&b, &objective, space.tolerances().lp)?
            .ok_or_else(|| OrbaError::NoDominator(format!("in `{}`", space.id())))?;
        let coords = sol.values(&a);
        let residual = domination_residual(space, &coords, x.coords());
        Ok(DominatorResult {
            a: space.vector(coords)?,
            value: sol.objective.max(0.0),
            residual,
        })
    }

    pub fn dominating_ratio_scan(&self, samples: usize, seed: u64) -> Result<RenormScan> {
        if samples == 0 {
            return Err(OrbaError::Argument("sample_count must be positive".into()));
        }
        let space = &*self.base;
        let mut xs: Vec<Vector> = (0..space.dim()).map(|j| space.basis_vector(j)).collect();
        xs.extend(sample_vectors(space, samples, seed));
        let ratios: Vec<Option<f64>> = xs
            .par_iter()
            .map(|x| {
                let rho = self.rho(x)?.total;
                if rho <= RATIO_GUARD {
                    return Ok(None);
                }
                Ok(Some(self.min_dominator(x)?.value / rho))
            })
            .collect::<Result<_>>()?;
        let (i, ratio) = argmax(ratios.into_iter()).unwrap_or((0, 0.0));
        Ok(RenormScan {
            epsilon: self.epsilon,
            samples,
            seed,
            ratio,
            witness: xs[i].coords().to_vec(),
            bound: (1.0 + self.epsilon).powi(2),
        })
    }

    /// `ρ` is equivalent to the base norm: `‖x‖ <= ρ(x) <= (ε C + 1) ‖x‖`.
    pub fn equivalence_constants(&self, c: f64) -> (f64, f64) {
        (1.0, self.epsilon * c + 1.0)
    }
}
