//! Atomic measure spaces and vector-valued functions on them.
//!
//! Every atom has positive mass, so "almost everywhere" and "everywhere" agree.
//! A `TruncatedN` space stands in for the counting measure on ℕ: the stored
//! atoms are the first few integers and the caller certifies the omitted tail
//! through a bound on `Σ_{n > N} μ(n) ‖f(n)‖`.

use std::sync::Arc;

use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{OrbaError, Result};
use crate::space::{OrderedSpace, Vector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Atom {
    pub label: String,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureKind {
    Finite,
    /// Default tail certificate for functions that do not carry their own.
    TruncatedN { tail_bound: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct MeasureSpace {
    atoms: Vec<Atom>,
    kind: MeasureKind,
}

fn check_tail(bound: f64) -> Result<()> {
    if bound.is_finite() && bound >= 0.0 {
        Ok(())
    } else {
        Err(OrbaError::Argument(format!(
            "tail bound must be finite and nonnegative, got {bound}"
        )))
    }
}

impl MeasureSpace {
    pub fn new(atoms: Vec<Atom>, kind: MeasureKind) -> Result<Self> {
        if atoms.is_empty() {
            return Err(OrbaError::Argument("measure space needs at least one atom".into()));
        }
        if let Some(a) = atoms.iter().find(|a| !(a.weight.is_finite() && a.weight > 0.0)) {
            return Err(OrbaError::Argument(format!(
                "atom `{}` has non-positive weight {}",
                a.label, a.weight
            )));
        }
        if let MeasureKind::TruncatedN { tail_bound } = kind {
            check_tail(tail_bound)?;
        }
        Ok(Self { atoms, kind })
    }

    pub fn finite<S: Into<String>>(atoms: impl IntoIterator<Item = (S, f64)>) -> Result<Self> {
        let atoms = atoms
            .into_iter()
            .map(|(label, weight)| Atom {
                label: label.into(),
                weight,
            })
            .collect();
        Self::new(atoms, MeasureKind::Finite)
    }

    /// Counting measure on `{1, …, n}` with a certified tail.
    pub fn counting(n: usize, tail_bound: f64) -> Result<Self> {
        let atoms = (1..=n)
            .map(|i| Atom {
                label: i.to_string(),
                weight: 1.0,
            })
            .collect();
        Self::new(atoms, MeasureKind::TruncatedN { tail_bound })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.atoms[i].weight
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, MeasureKind::Finite)
    }
}

/// A value with an additive error bar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Estimate {
    pub value: f64,
    pub uncertainty: f64,
}

impl Estimate {
    pub fn upper(&self) -> f64 {
        self.value + self.uncertainty
    }
}

/// A function from the atoms of a measure space into an ordered space.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrableFunction {
    measure: Arc<MeasureSpace>,
    carrier: Arc<OrderedSpace>,
    values: Vec<Vector>,
    tail_norm_bound: Option<f64>,
}

impl IntegrableFunction {
    pub fn new(
        measure: Arc<MeasureSpace>,
        carrier: Arc<OrderedSpace>,
        values: Vec<Vector>,
    ) -> Result<Self> {
        if values.len() != measure.len() {
            return Err(OrbaError::Dimension {
                context: "function values per atom",
                expected: measure.len(),
                found: values.len(),
            });
        }
        for v in &values {
            carrier.check_carrier(v)?;
        }
        Ok(Self {
            measure,
            carrier,
            values,
            tail_norm_bound: None,
        })
    }

    pub fn from_coords(
        measure: Arc<MeasureSpace>,
        carrier: Arc<OrderedSpace>,
        coords: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let values = coords
            .into_iter()
            .map(|c| carrier.vector(c))
            .collect::<Result<_>>()?;
        Self::new(measure, carrier, values)
    }

    pub fn zero(measure: Arc<MeasureSpace>, carrier: Arc<OrderedSpace>) -> Self {
        let values = vec![Vector::zeros(&carrier); measure.len()];
        Self {
            measure,
            carrier,
            values,
            tail_norm_bound: None,
        }
    }

    /// `a · 1_A` for a set of atom indices.
    pub fn indicator(
        measure: Arc<MeasureSpace>,
        carrier: Arc<OrderedSpace>,
        atoms: &[usize],
        a: &Vector,
    ) -> Result<Self> {
        carrier.check_carrier(a)?;
        let mut f = Self::zero(measure, carrier);
        for &i in atoms {
            let slot = f.values.get_mut(i).ok_or_else(|| {
                OrbaError::Argument(format!("atom index {i} out of range"))
            })?;
            *slot = a.clone();
        }
        Ok(f)
    }

    /// Certifies `Σ` over omitted atoms of `μ ‖f‖` on a truncated space.
    pub fn with_tail_bound(mut self, bound: f64) -> Result<Self> {
        check_tail(bound)?;
        self.tail_norm_bound = Some(bound);
        Ok(self)
    }

    pub fn measure(&self) -> &Arc<MeasureSpace> {
        &self.measure
    }

    pub fn carrier(&self) -> &Arc<OrderedSpace> {
        &self.carrier
    }

    pub fn values(&self) -> &[Vector] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Vector {
        &self.values[i]
    }

    /// The certified tail: the function's own bound, else the measure's, else zero.
    pub fn tail_bound(&self) -> f64 {
        match (self.tail_norm_bound, self.measure.kind()) {
            (Some(b), _) => b,
            (None, MeasureKind::TruncatedN { tail_bound }) => tail_bound,
            (None, MeasureKind::Finite) => 0.0,
        }
    }

    /// Finite spaces carry only simple functions; on a truncated space a
    /// function is simple when its tail vanishes.
    pub fn is_simple(&self) -> bool {
        self.tail_bound() == 0.0
    }

    fn check_compatible(&self, other: &IntegrableFunction) -> Result<()> {
        if self.measure != other.measure {
            return Err(OrbaError::MeasureMismatch(
                "functions live on different measure spaces".into(),
            ));
        }
        if self.carrier.id() != other.carrier.id() {
            return Err(OrbaError::Carrier {
                expected: self.carrier.id().to_string(),
                found: other.carrier.id().to_string(),
            });
        }
        Ok(())
    }

    /// `α f + β g`; tail certificates add up by the triangle inequality.
    pub fn combine(&self, alpha: f64, other: &IntegrableFunction, beta: f64) -> Result<Self> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| x.combine(alpha, y, beta))
            .collect::<Result<_>>()?;
        let tail = alpha.abs() * self.tail_bound() + beta.abs() * other.tail_bound();
        Ok(Self {
            measure: self.measure.clone(),
            carrier: self.carrier.clone(),
            values,
            tail_norm_bound: (tail > 0.0).then_some(tail),
        })
    }

    pub fn sub(&self, other: &IntegrableFunction) -> Result<Self> {
        self.combine(1.0, other, -1.0)
    }

    /// Keeps the values on the first `n` atoms and zeroes the rest; the result is simple.
    pub fn truncate(&self, n: usize) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| if i < n { v.clone() } else { Vector::zeros(&self.carrier) })
            .collect();
        Self {
            measure: self.measure.clone(),
            carrier: self.carrier.clone(),
            values,
            tail_norm_bound: Some(0.0),
        }
    }

    /// Atomwise `T ∘ f` into another space.
    pub fn map_values(
        &self,
        target: Arc<OrderedSpace>,
        map: impl Fn(&Vector) -> Result<Vector>,
    ) -> Result<Self> {
        let values = self.values.iter().map(map).collect::<Result<Vec<_>>>()?;
        for v in &values {
            target.check_carrier(v)?;
        }
        Ok(Self {
            measure: self.measure.clone(),
            carrier: target,
            values,
            tail_norm_bound: self.tail_norm_bound,
        })
    }

    /// Atomwise norms `‖f(i)‖`.
    pub fn pointwise_norms(&self) -> Result<Vec<f64>> {
        self.values
            .par_iter()
            .map(|v| self.carrier.norm(v))
            .collect()
    }
}

/// `φ(f) = Σ μ(A_i) f(i)` for simple `f`.
pub fn phi_integral(f: &IntegrableFunction) -> Result<Vector> {
    if !f.is_simple() {
        return Err(OrbaError::Argument(
            "the elementary integral needs a simple function (tail bound is nonzero)".into(),
        ));
    }
    Ok(weighted_sum(f))
}

pub(crate) fn weighted_sum(f: &IntegrableFunction) -> Vector {
    let dim = f.carrier.dim();
    let mut acc = vec![0.0; dim];
    for (atom, v) in f.measure.atoms().iter().zip(&f.values) {
        for (a, x) in acc.iter_mut().zip(v.coords()) {
            *a += atom.weight * x;
        }
    }
    f.carrier.vector(acc).expect("dimension matches")
}

/// `∫ ‖f‖ dμ` with the certified tail as uncertainty.
pub fn l1_norm(f: &IntegrableFunction) -> Result<Estimate> {
    let norms = f.pointwise_norms()?;
    let value = f
        .measure
        .atoms()
        .iter()
        .zip(&norms)
        .map(|(a, n)| a.weight * n)
        .sum();
    Ok(Estimate {
        value,
        uncertainty: f.tail_bound(),
    })
}

/// `f ⪯ g` at every atom.
pub fn ae_leq(f: &IntegrableFunction, g: &IntegrableFunction) -> Result<bool> {
    f.check_compatible(g)?;
    for (x, y) in f.values.iter().zip(&g.values) {
        if !f.carrier.leq(x, y)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// JSON form of a function together with its measure space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct FunctionFile {
    pub atoms: Vec<Atom>,
    pub values: Vec<Vec<f64>>,
    pub carrier: String,
    /// Present for a truncated counting-type space.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<f64>,
}

impl FunctionFile {
    /// Builds the function; `resolve` maps the carrier id to a space.
    pub fn build(
        &self,
        resolve: impl Fn(&str) -> Option<Arc<OrderedSpace>>,
    ) -> Result<IntegrableFunction> {
        let carrier = resolve(&self.carrier).ok_or_else(|| {
            OrbaError::Descriptor(format!("unknown carrier space `{}`", self.carrier))
        })?;
        let kind = match self.tail_bound {
            Some(tail_bound) => MeasureKind::TruncatedN { tail_bound },
            None => MeasureKind::Finite,
        };
        let measure = Arc::new(MeasureSpace::new(self.atoms.clone(), kind)?);
        IntegrableFunction::from_coords(measure, carrier, self.values.clone())
    }

    pub fn from_function(f: &IntegrableFunction) -> Self {
        Self {
            atoms: f.measure.atoms().to_vec(),
            values: f.values.iter().map(|v| v.coords().to_vec()).collect(),
            carrier: f.carrier.id().to_string(),
            tail_bound: match f.measure.kind() {
                MeasureKind::Finite => None,
                MeasureKind::TruncatedN { .. } => Some(f.tail_bound()),
            },
        }
    }
}
