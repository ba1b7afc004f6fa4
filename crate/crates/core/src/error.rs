use thiserror::Error;

/// Errors raised by the solvers and their building blocks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("out of domain: {0}")]
    OutOfDomain(String),
    /// A caller broke an operation's precondition (e.g. asked for an inscribed
    /// box whose radius already covers the whole box).
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
