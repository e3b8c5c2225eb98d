use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain too large: {what} = {size} exceeds the bound {bound}")]
    DomainTooLarge { what: &'static str, size: u128, bound: u128 },

    #[error("estimated memory {needed_bytes} bytes exceeds the budget of {budget_bytes} bytes")]
    MemoryBudget { needed_bytes: u64, budget_bytes: u64 },

    #[error("cyclotomic elements over different primes ({0} and {1})")]
    MixedPrime(u64, u64),

    #[error("inexact division: {0}")]
    InexactDivision(String),

    #[error("assumption failed: {0}")]
    AssumptionFailed(String),

    #[error("functional-equation completion is degenerate: {0}")]
    Degenerate(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
