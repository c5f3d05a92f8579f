use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid operator: {0}")]
    InvalidOperator(String),
    #[error("{value} is not in Z_(d,l) with d = {d}, l = {ell}")]
    NotInZdl { value: String, d: u64, ell: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("memory budget exceeded: {size} elements, budget {budget}")]
    BudgetExceeded { size: usize, budget: usize },
    #[error("initial data does not extend: {0}")]
    DoesNotExtend(String),
    #[error("iteration limit of {0} reached")]
    IterationLimit(usize),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("cannot parse {0:?} as a rational")]
    BadRational(String),
}

pub type Result<T> = std::result::Result<T, Error>;
