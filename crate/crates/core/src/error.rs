use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("origin and selected destination coincide; adjustment direction is undefined")]
    DegenerateDirection,
    #[error("adjustment magnitude must be finite and non-negative, got {0}")]
    InvalidMagnitude(f64),
    #[error("non-finite coordinate")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StaircaseError {
    #[error("invalid staircase configuration: {0}")]
    Config(&'static str),
    #[error("staircase {0:?} has already converged")]
    AlreadyConverged(crate::staircase::StaircaseId),
    #[error("staircase pair has not converged")]
    NotConverged,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SessionError {
    #[error("invalid block configuration: {0}")]
    Config(&'static str),
    #[error("responder failed: {0}")]
    Responder(alloc::string::String),
    #[error("catch score is undefined for an empty set of catch trials")]
    NoCatchTrials,
    #[error("catch evaluation received a non-catch trial at position {0}")]
    NotACatchTrial(usize),
    #[error(transparent)]
    Staircase(#[from] StaircaseError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Observer(#[from] ObserverError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("no included observations")]
    Empty,
    #[error("need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("participant {0} is missing one or more condition cells")]
    MissingCell(u32),
    #[error("input vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("correlation undefined: zero variance")]
    ZeroVariance,
    #[error("value out of range: {0}")]
    OutOfRange(&'static str),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObserverError {
    #[error("invalid observer parameter: {0}")]
    Invalid(&'static str),
    #[error("trait/threshold correlation matrix is not positive definite")]
    NotPositiveDefinite,
}
