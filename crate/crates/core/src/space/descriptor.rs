//! JSON descriptors for ordered spaces: `{"dim": n, "cone": {...}, "norm": {...}}`.
//!
//! Derived spaces nest their factors: an `inf_sum` norm carries both factor
//! descriptors and their ambient embeddings, a `quotient` norm carries its
//! source descriptor and map while the top-level `cone` is the target order.

use std::sync::Arc;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{OrbaError, Result};
use crate::linalg::Matrix;
use crate::tol::Tolerances;

use super::{image_space, sum_space, ConeSpec, NormSpec, OrderedSpace, SumEmbedding};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SpaceDescriptor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeSpec>,
    pub norm: NormDescriptor,
    /// Columns give ambient coordinates of the basis vectors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Matrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormDescriptor {
    WeightedL1 {
        weights: Vec<f64>,
    },
    Sup,
    OrderUnit {
        unit: Vec<f64>,
    },
    InfSum {
        left: Box<SpaceDescriptor>,
        right: Box<SpaceDescriptor>,
        left_map: Matrix,
        right_map: Matrix,
    },
    Quotient {
        source: Box<SpaceDescriptor>,
        map: Matrix,
    },
}

impl SpaceDescriptor {
    pub fn build(&self, fallback_id: &str) -> Result<OrderedSpace> {
        self.build_with(fallback_id, Tolerances::default())
    }

    pub fn build_with(&self, fallback_id: &str, tol: Tolerances) -> Result<OrderedSpace> {
        let id = self.id.clone().unwrap_or_else(|| fallback_id.to_owned());
        let space = match &self.norm {
            NormDescriptor::InfSum {
                left,
                right,
                left_map,
                right_map,
            } => {
                let l = Arc::new(left.build_with(&format!("{id}.left"), tol)?);
                let r = Arc::new(right.build_with(&format!("{id}.right"), tol)?);
                let emb = SumEmbedding {
                    left_map: left_map.clone(),
                    right_map: right_map.clone(),
                };
                sum_space(id, l, r, &emb)?
            }
            NormDescriptor::Quotient { source, map } => {
                let src = Arc::new(source.build_with(&format!("{id}.source"), tol)?);
                let cone = self.cone.as_ref().ok_or_else(|| {
                    OrbaError::Descriptor("quotient space needs the target cone".into())
                })?;
                image_space(id, src, map, cone)?.space
            }
            base => {
                let cone = self
                    .cone
                    .clone()
                    .ok_or_else(|| OrbaError::Descriptor("missing cone".into()))?;
                let norm = match base {
                    NormDescriptor::WeightedL1 { weights } => NormSpec::WeightedL1 {
                        weights: weights.clone(),
                    },
                    NormDescriptor::Sup => NormSpec::Sup,
                    NormDescriptor::OrderUnit { unit } => NormSpec::OrderUnit { unit: unit.clone() },
                    _ => unreachable!(),
                };
                let mut b = OrderedSpace::builder(id, cone, norm).tolerances(tol);
                if let Some(e) = &self.embedding {
                    b = b.embedding(e.clone());
                }
                b.build()?
            }
        };
        if let Some(d) = self.dim {
            if d != space.dim() {
                return Err(OrbaError::Dimension {
                    context: "space descriptor",
                    expected: d,
                    found: space.dim(),
                });
            }
        }
        Ok(space)
    }
}

impl OrderedSpace {
    pub fn to_descriptor(&self) -> SpaceDescriptor {
        let emb = |s: &OrderedSpace, m: &Matrix| match s.embedding() {
            Some(e) => e.mul(m),
            None => m.clone(),
        };
        let (cone, norm) = match self.norm_spec() {
            NormSpec::WeightedL1 { weights } => (
                Some(self.cone().clone()),
                NormDescriptor::WeightedL1 {
                    weights: weights.clone(),
                },
            ),
            NormSpec::Sup => (Some(self.cone().clone()), NormDescriptor::Sup),
            NormSpec::OrderUnit { unit } => (
                Some(self.cone().clone()),
                NormDescriptor::OrderUnit { unit: unit.clone() },
            ),
            NormSpec::InfSum(s) => (
                None,
                NormDescriptor::InfSum {
                    left: Box::new(s.left.to_descriptor()),
                    right: Box::new(s.right.to_descriptor()),
                    left_map: emb(self, &s.left_map),
                    right_map: emb(self, &s.right_map),
                },
            ),
            NormSpec::Quotient(q) => (
                Some(q.target_cone.clone()),
                NormDescriptor::Quotient {
                    source: Box::new(q.source.to_descriptor()),
                    map: emb(self, &q.map),
                },
            ),
        };
        let base = matches!(
            self.norm_spec(),
            NormSpec::WeightedL1 { .. } | NormSpec::Sup | NormSpec::OrderUnit { .. }
        );
        SpaceDescriptor {
            id: Some(self.id().to_string()),
            dim: Some(self.dim()),
            cone,
            norm,
            embedding: if base { self.embedding().cloned() } else { None },
        }
    }
}
