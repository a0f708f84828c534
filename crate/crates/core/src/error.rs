use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The caller supplied a value outside an operation's domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A detected repetition reached the edge of the inspected window, so
    /// the verdict would depend on letters that were never looked at.
    #[error("window exhausted: {0}")]
    WindowExhausted(String),
    /// A bounded search hit its configured limits.
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    /// An enumeration ran past its node budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    /// A structural identity that must hold exactly did not.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    /// The construction could not keep its length invariant.
    #[error("construction failure: {0}")]
    ConstructionFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
