use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("object of size {size} exceeds the size cap {cap}")]
    CapExceeded { size: u128, cap: usize },
    #[error("search space of {count} candidates exceeds the budget {budget}")]
    BudgetExceeded { count: u128, budget: u128 },
    #[error("no adjoint: {0}")]
    NoAdjoint(String),
    #[error("fiber has no {0}")]
    NoSuchElement(String),
    #[error("square is not a pullback: {0}")]
    NotAPullback(String),
    #[error("side condition failed: {0}")]
    SideConditionFailed(String),
    #[error("closure hypothesis failed: {0}")]
    ClosureHypothesisFailed(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("sort error: {0}")]
    Sort(String),
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
