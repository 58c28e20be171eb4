use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed braid word: {0}")]
    MalformedWord(String),

    #[error("generator index {index} out of range for {strands} strands (valid: 1..={max})", max = .strands.saturating_sub(1))]
    IndexOutOfRange { index: usize, strands: usize },

    #[error("invalid puncture count {0}: need at least 2")]
    InvalidPunctureCount(usize),

    #[error("invalid scale factor {0}: must be a positive integer")]
    InvalidScale(String),

    #[error("non-finite value in floating-point orbit (renormalization threshold too large?)")]
    FloatOverflow,

    #[error("empty lamination has no intersection count to take the logarithm of")]
    EmptyLamination,

    #[error("coordinate size exceeded the cap of {cap_digits} decimal digits")]
    ResourceLimit { cap_digits: u64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("estimator did not converge within {iterations} iterations")]
    NotConverged { iterations: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
