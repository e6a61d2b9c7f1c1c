//! Error type shared across the library.
//!
//! Three failure classes matter to callers: parameter validation (caller
//! passed something out of domain), resource budgets (the request is valid
//! but would allocate or iterate beyond configured limits), and decode
//! failures when reading serialized count tables. I/O errors pass through.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The request is outside the documented domain of the operation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The request is well-formed but exceeds a resource budget.
    #[error("budget exceeded: {what} requires {required}, limit is {limit}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    /// A serialized count table failed validation during decoding.
    #[error("corrupt count table: {0}")]
    CorruptTable(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand for a validation failure.
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
