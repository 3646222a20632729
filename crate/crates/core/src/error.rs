use thiserror::Error;

/// Errors raised by the library.
///
/// Verification verdicts (a pair that is not spectral, a set that does not
/// tile) are ordinary data and never surface through this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition of an operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A construction or a theorem-backed assertion failed its own check.
    /// This always indicates a bug.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    /// Two operands live in different groups.
    #[error("operands live in Z_{left} and Z_{right}")]
    ContextMismatch { left: usize, right: usize },

    /// Malformed multiset literal or factored order.
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

pub(crate) fn invariant(msg: impl Into<String>) -> Error {
    Error::InvariantViolation(msg.into())
}
