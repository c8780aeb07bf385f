use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid necklace: {0}")]
    InvalidNecklace(#[from] ValidationError),

    #[error("search aborted after exceeding the node budget of {budget} nodes")]
    BudgetExceeded { budget: u64 },

    #[error("no admissible link pair for gluing")]
    NoGluingLink,

    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("digraph too large: b = {b} exceeds the guard of {limit}")]
    TooLarge { b: usize, limit: usize },

    #[error("recurrence produced a non-integer term at offset {index}")]
    NonIntegerTerm { index: usize },

    #[error("reference data: {0}")]
    Reference(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// First constraint a candidate bead sequence violates.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("a necklace needs at least 3 beads, got {len}")]
    TooShort { len: usize },

    #[error("bead {bead} at position {position} is out of range for length {len}")]
    OutOfRange { position: usize, bead: usize, len: usize },

    #[error("bead {bead} appears twice (second time at position {position})")]
    Repeated { position: usize, bead: usize },

    #[error("beads {left} and {right} at position {position} differ by {difference}")]
    BadDifference { position: usize, left: usize, right: usize, difference: usize },
}

impl ValidationError {
    /// True for the "not a permutation of 0..n" family of violations.
    pub fn is_not_permutation(&self) -> bool {
        matches!(self, ValidationError::OutOfRange { .. } | ValidationError::Repeated { .. })
    }
}
