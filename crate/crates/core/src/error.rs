use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invariant factor list is empty")]
    EmptyFactorList,
    #[error("invariant factor {0} is smaller than 2")]
    InvalidFactor(u32),
    #[error("invariant factor {0} does not divide the next factor {1}")]
    DivisibilityViolation(u32, u32),
    #[error("element index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("{what} needs order at most {bound}, group has order {order}")]
    BoundExceeded {
        what: &'static str,
        bound: usize,
        order: usize,
    },
    #[error("sequence is not a subsequence of the sequence it is removed from")]
    NotASubsequence,
    #[error("operation requires a nonempty set")]
    EmptySet,
    #[error("element sets belong to groups of different order ({0} vs {1})")]
    GroupMismatch(usize, usize),
    #[error("the zero element is not allowed here")]
    ZeroInSet,
    #[error("no closed formula for rank {0} groups")]
    FormulaUnavailable(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("sequence contains the zero element")]
    ZeroTermPresent,
    #[error("no witness found: {0}")]
    WitnessNotFound(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported certificate schema version {0}")]
    SchemaVersion(u32),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
