use std::sync::Arc;

use crate::linalg::Matrix;

use super::OrderedSpace;

/// How the norm of an [`OrderedSpace`] is evaluated.
///
/// `WeightedL1` and `Sup` are evaluated directly. The remaining variants are
/// infima and go through the LP kernel; at finite dimension all of them are
/// attained.
#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec {
    /// `Σ w_i |x_i|` with strictly positive weights.
    WeightedL1 { weights: Vec<f64> },
    /// `max_i |x_i|`.
    Sup,
    /// `inf { s >= 0 : -s a ⪯ x ⪯ s a }` for an order unit `a`.
    OrderUnit { unit: Vec<f64> },
    /// `inf { ‖x‖₁ + ‖y‖₂ : z = L x + R y }` over two ordered spaces.
    InfSum(Box<InfSumNorm>),
    /// `inf { ‖x‖ : T x = z }` on the image of a linear map.
    Quotient(Box<QuotientNorm>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfSumNorm {
    pub left: Arc<OrderedSpace>,
    pub right: Arc<OrderedSpace>,
    /// Coordinates of `left` mapped into coordinates of the sum space.
    pub left_map: Matrix,
    pub right_map: Matrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientNorm {
    pub source: Arc<OrderedSpace>,
    /// The map written in coordinates of the image space.
    pub map: Matrix,
    /// The order of the target space before restriction to the image.
    pub target_cone: super::ConeSpec,
}

impl NormSpec {
    pub fn name(&self) -> &'static str {
        match self {
            NormSpec::WeightedL1 { .. } => "weighted_l1",
            NormSpec::Sup => "sup",
            NormSpec::OrderUnit { .. } => "order_unit",
            NormSpec::InfSum(_) => "inf_sum",
            NormSpec::Quotient(_) => "quotient",
        }
    }

    /// Evaluates the closed-form variants; `None` for the infimum variants.
    pub fn eval_direct(&self, x: &[f64]) -> Option<f64> {
        match self {
            NormSpec::WeightedL1 { weights } => {
                Some(weights.iter().zip(x).map(|(w, v)| w * v.abs()).sum())
            }
            NormSpec::Sup => Some(x.iter().fold(0.0, |m, v| m.max(v.abs()))),
            _ => None,
        }
    }
}
