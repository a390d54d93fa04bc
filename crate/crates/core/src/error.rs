use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Invalid datum, arguments, or violated operation precondition.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("p-adic precision exhausted after {digits} digits")]
    PrecisionExhausted { digits: u32 },
    #[error("group not closed within order bound {bound}")]
    OrderBoundExceeded { bound: usize },
    /// An internal consistency check failed; indicates a bug.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
