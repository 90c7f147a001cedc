use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("measurement count {m} outside supported range 1..={max}")]
    MeasurementGuard { m: usize, max: usize },

    #[error("probability {value} outside [0, 1]")]
    ProbabilityRange { value: String },

    #[error("invalid convex combination: {0}")]
    InvalidCombination(String),

    #[error("combination does not reproduce the claimed point")]
    CombinationMismatch,

    #[error("need at least {need} points in dimension {dim}, got {got}")]
    TooFewPoints { need: usize, dim: usize, got: usize },

    #[error("starting combination is degenerate: reduction returns it unchanged")]
    DegenerateStart,

    #[error("polyhedron is unbounded")]
    Unbounded,

    #[error("index {index} out of range for length {len}")]
    IndexRange { index: usize, len: usize },

    #[error("mixtures are not operationally equivalent")]
    NotEquivalent,

    #[error("model inconsistent: {0}")]
    ModelMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
