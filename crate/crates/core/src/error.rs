use thiserror::Error;

/// Errors raised by the screening library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScreenError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("need at least {min} observations, got {found}")]
    TooFewObservations { min: usize, found: usize },

    #[error("dataset has no predictors")]
    NoPredictors,

    #[error("non-finite value in {field} at row {row}")]
    NonFinite { field: String, row: usize },

    #[error("exposure variable is constant; bandwidth cannot be derived from its spread")]
    ConstantExposure,

    #[error("invalid bandwidth: {0}")]
    InvalidBandwidth(String),

    #[error("predictor index {index} out of range for p = {p}")]
    IndexOutOfRange { index: usize, p: usize },

    #[error("moment table built for n = {table} but dataset has n = {data}")]
    TableMismatch { table: usize, data: usize },

    #[error("cutoff d = {d} outside [1, {p}]")]
    InvalidCutoff { d: usize, p: usize },

    #[error("active set is empty")]
    EmptyActiveSet,

    #[error("inconsistent dimensions across replications: {0}")]
    InconsistentDimensions(String),

    #[error("unsupported scenario: {0}")]
    UnsupportedScenario(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

pub type Result<T> = std::result::Result<T, ScreenError>;
