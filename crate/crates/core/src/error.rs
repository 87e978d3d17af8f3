use thiserror::Error;

/// Errors raised by the index calculus, the character ring and the
/// localization engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("partition {partition} does not fit in the {rows}x{cols} box")]
    OutsideBox {
        partition: String,
        rows: usize,
        cols: usize,
    },

    #[error("invalid flag shape: {0}")]
    InvalidShape(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("index {index} is not a minimal coset representative for {shape}")]
    InvalidIndex { index: String, shape: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("not divisible: {0}")]
    NotDivisible(String),

    #[error("class is not in the span of Schubert classes: {0}")]
    NotInSpan(String),

    #[error("shift operator does not fix the tail value of the series")]
    TailNotFixed,

    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
