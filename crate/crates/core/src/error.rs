use alloc::string::String;

/// Failure modes of the algebra kernel.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("too many variables: {0} (limit {limit})", limit = crate::monomial::MAX_VARS)]
    TooManyVariables(usize),
    #[error("step budget of {budget} S-pairs exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("not decidable: {0}")]
    NotDecidable(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("index {index} outside 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn mismatch(what: &str) -> Error {
    Error::AmbientMismatch(String::from(what))
}

pub(crate) fn invalid(what: impl Into<String>) -> Error {
    Error::Invalid(what.into())
}
