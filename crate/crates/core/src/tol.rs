//! Numerical tolerances shared across the crate.

use serde::{Deserialize, Serialize};

/// Feasibility and optimality tolerance for the LP kernel and every infimum it computes.
pub const LP: f64 = 1e-9;
/// Slack allowed in cone membership tests.
pub const CONE: f64 = 1e-9;
/// Tolerance for property checks on norms and integrals.
pub const NUM: f64 = 1e-8;
/// Values of the dominating norm below this are treated as zero in ratio statistics.
pub const RATIO_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct Tolerances {
    pub lp: f64,
    pub cone: f64,
    pub num: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            lp: LP,
            cone: CONE,
            num: NUM,
        }
    }
}
