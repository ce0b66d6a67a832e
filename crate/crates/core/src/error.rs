use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("evaluation budget exceeded: {required} evaluations required, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("polytope is not full-dimensional (affine dimension {dim} in R^{ambient})")]
    Degenerate { dim: usize, ambient: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("mismatched cyclotomic fields: p = {0} vs p = {1}")]
    FieldMismatch(u64, u64),

    #[error("zero coordinate at index {0} while a negative exponent is present")]
    ZeroCoordinate(usize),

    #[error("degenerate or wrong degree: L-coefficient A_{index} is not integral")]
    NonIntegral { index: usize },

    #[error("polygon endpoints differ: {0} vs {1}")]
    EndpointMismatch(String, String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
