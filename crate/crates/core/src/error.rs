use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid cutoff {0}: every mode needs at least one level")]
    InvalidCutoff(usize),
    #[error("duplicate mode label {0}")]
    LabelCollision(String),
    #[error("mode {0} not present")]
    ModeNotFound(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cutoff too small: discarded tail mass {tail:.3e} exceeds budget {budget:.3e}")]
    CutoffTooSmall { tail: f64, budget: f64 },
    #[error("ill-defined state: {0}")]
    IllDefinedState(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("optimization undefined: {0}")]
    OptimizationUndefined(String),
    #[error("workload too large: {0}")]
    TooLarge(String),
    #[error("unknown key {0}")]
    UnknownKey(String),
    #[error("expected {expected} copies, got {got}")]
    CopyCountMismatch { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
