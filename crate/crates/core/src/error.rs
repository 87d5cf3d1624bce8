use thiserror::Error;

use crate::topology::{HoleConditionResult, Obstruction};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in the library.
///
/// Negative *decisions* (an irreducible tuple, a tuple outside the principal
/// component, a rejected perturbation) are not errors; they come back as
/// outcome enums carrying a report. Errors are reserved for violated
/// preconditions and numerical refusals.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("spectrum is empty")]
    EmptySpectrum,

    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("operands belong to different algebra instances")]
    OwnerMismatch,

    #[error("element is not invertible: min modulus {min:e} at spectrum point {index}")]
    NotInvertible { min: f64, index: usize },

    #[error("tuple is not invertible: min modulus {min:e} at spectrum point {index}")]
    NotInvertibleTuple { min: f64, index: usize },

    #[error("no continuous logarithm exists: {0}")]
    LogObstruction(Obstruction),

    #[error("real logarithm needs positive values, found {value} at spectrum point {index}")]
    NonPositiveValue { index: usize, value: f64 },

    #[error("zero set is not contained in the domain mask")]
    NotSubset,

    #[error("grid too coarse: phase step {step:.4} rad between spectrum points {from} and {to}")]
    Resolution { from: usize, to: usize, step: f64 },

    #[error("extension source is empty")]
    EmptySource,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not unipotent: sup norm of N^{power} is {residual:e}")]
    NotUnipotent { power: usize, residual: f64 },

    #[error("matrix is not near the identity: operator norm bound of M - I is {norm}")]
    NotNearIdentity { norm: f64 },

    #[error("matrix is not special orthogonal: {0}")]
    NotSpecialOrthogonal(String),

    #[error("conjugating matrix is singular: min |det| = {min_det:e}")]
    SingularS { min_det: f64 },

    #[error("hole condition violated: {0}")]
    HoleConditionViolated(Obstruction),

    #[error("unsupported configuration: {reason}")]
    Scope {
        reason: String,
        decision: Option<Box<HoleConditionResult>>,
    },

    #[error("zero-set threshold {eps:e} too large: |f| drops to {min:e} at spectrum point {index} inside it")]
    ThresholdTooLarge { eps: f64, min: f64, index: usize },

    #[error("path leaves the invertible set at t = {t}: min modulus {min:e}")]
    PathLeavesInvertible { t: f64, min: f64 },

    #[error("path does not end at the claimed tuple: residual {residual:e}")]
    PathEndpointMismatch { residual: f64 },

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("serialization: {0}")]
    Serialization(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptySpectrum => "empty_spectrum",
            Error::InvalidDescriptor(_) => "invalid_descriptor",
            Error::OwnerMismatch => "owner_mismatch",
            Error::NotInvertible { .. } => "not_invertible",
            Error::NotInvertibleTuple { .. } => "not_invertible_tuple",
            Error::LogObstruction(_) => "log_obstruction",
            Error::NonPositiveValue { .. } => "non_positive_value",
            Error::NotSubset => "not_subset",
            Error::Resolution { .. } => "resolution",
            Error::EmptySource => "empty_source",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::NotUnipotent { .. } => "not_unipotent",
            Error::NotNearIdentity { .. } => "not_near_identity",
            Error::NotSpecialOrthogonal(_) => "not_special_orthogonal",
            Error::SingularS { .. } => "singular_s",
            Error::HoleConditionViolated(_) => "hole_condition_violated",
            Error::Scope { .. } => "scope",
            Error::ThresholdTooLarge { .. } => "threshold_too_large",
            Error::PathLeavesInvertible { .. } => "path_leaves_invertible",
            Error::PathEndpointMismatch { .. } => "path_endpoint_mismatch",
            Error::InvalidWitness(_) => "invalid_witness",
            Error::Serialization(_) => "serialization",
        }
    }

    pub(crate) fn scope(reason: impl Into<String>) -> Self {
        Error::Scope {
            reason: reason.into(),
            decision: None,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
