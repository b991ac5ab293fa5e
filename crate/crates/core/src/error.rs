use thiserror::Error;

use crate::lp::LpError;

pub type Result<T, E = OrbaError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbaError {
    /// A vector or function is carried by a different space than the one it is used with.
    #[error("carrier mismatch: expected space `{expected}`, found `{found}`")]
    Carrier { expected: String, found: String },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    Dimension {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid descriptor: {0}")]
    Descriptor(String),

    #[error("space `{0}` is not directed (cone is not generating)")]
    NotDirected(String),

    #[error("vector is not in the space: {0}")]
    NotInSpace(String),

    #[error("order violation: {0}")]
    Order(String),

    #[error("unsupported: {0}")]
    Capability(String),

    #[error("no dominating element exists: {0}")]
    NoDominator(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("function is not integrable: {0}")]
    NotIntegrable(String),

    #[error("slack schedule infeasible: {0}")]
    Schedule(String),

    #[error("bound violated: {0}")]
    Bound(String),

    #[error("uncoverable: {0}")]
    Uncoverable(String),

    #[error("not in the principal ideal: coordinate {index} is {value} but the unit vanishes there")]
    NotInIdeal { index: usize, value: f64 },

    #[error("unknown cover member {0}")]
    UnknownMember(usize),

    #[error("measure spaces differ: {0}")]
    MeasureMismatch(String),

    #[error("group error: {0}")]
    Group(String),

    #[error("evaluation at {point} is outside the stored range [{lo}, {hi}]")]
    OutOfRange { point: i64, lo: i64, hi: i64 },

    #[error("no growth bound available for sup |f| over [-{radius}, {radius}]")]
    MissingGrowth { radius: i64 },

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error(transparent)]
    Lp(#[from] LpError),
}

impl OrbaError {
    /// Errors that stem from malformed input rather than a failed computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            OrbaError::Descriptor(_)
                | OrbaError::Dimension { .. }
                | OrbaError::Carrier { .. }
                | OrbaError::NotDirected(_)
                | OrbaError::Argument(_)
                | OrbaError::MeasureMismatch(_)
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            OrbaError::Carrier { .. } => "carrier",
            OrbaError::Dimension { .. } => "dimension",
            OrbaError::Descriptor(_) => "descriptor",
            OrbaError::NotDirected(_) => "not_directed",
            OrbaError::NotInSpace(_) => "not_in_space",
            OrbaError::Order(_) => "order",
            OrbaError::Capability(_) => "capability",
            OrbaError::NoDominator(_) => "no_dominator",
            OrbaError::Argument(_) => "argument",
            OrbaError::NotIntegrable(_) => "not_integrable",
            OrbaError::Schedule(_) => "schedule",
            OrbaError::Bound(_) => "bound",
            OrbaError::Uncoverable(_) => "uncoverable",
            OrbaError::NotInIdeal { .. } => "not_in_ideal",
            OrbaError::UnknownMember(_) => "unknown_member",
            OrbaError::MeasureMismatch(_) => "measure_mismatch",
            OrbaError::Group(_) => "group",
            OrbaError::OutOfRange { .. } => "out_of_range",
            OrbaError::MissingGrowth { .. } => "missing_growth",
            OrbaError::Consistency(_) => "consistency",
            OrbaError::Lp(_) => "lp",
        }
    }
}
