use thiserror::Error;

/// Errors produced by the Hecke engine.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum HeckeError {
    #[error("unsupported dimension {0}; only n = 2 and n = 3 are implemented")]
    Dimension(usize),

    #[error("expected {expected} matrix entries, got {got}")]
    EntryCount { expected: usize, got: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid exponent vector: {0}")]
    Exponents(String),

    #[error("invalid coset label: {0}")]
    Label(String),

    #[error(
        "enumeration of {what} needs about {required} candidate evaluations, \
         budget is {budget}"
    )]
    BudgetExceeded {
        what: String,
        required: u128,
        budget: u64,
    },

    #[error("entries of {0} are too large for the enumeration kernel")]
    EntryRange(String),

    #[error("no explicit representative table for {0}")]
    UnsupportedTable(String),

    #[error("coprime product needs coprime supports, got {0} and {1}")]
    NotCoprime(String, String),

    #[error("eigenvalue table has no value at {0}")]
    MissingEigenvalue(u64),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("internal consistency failure: {0}")]
    Inconsistency(String),
}

impl HeckeError {
    /// True for refusals caused by the feasibility limits rather than bad input.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            HeckeError::BudgetExceeded { .. } | HeckeError::EntryRange(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, HeckeError>;
