use thiserror::Error;

/// Errors raised by the algebra, form and symbol routines.
///
/// Every variant carries owned data so results can be cached and shared
/// between threads.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("field of order {0} exceeds the supported table size")]
    FieldTooLarge(u64),
    #[error("no primitive {p}-th root of unity: {p} does not divide {q} - 1")]
    NoRootOfUnity { p: u64, q: u64 },
    #[error("p = {0} equals the characteristic of the field")]
    CharacteristicEqualsP(u64),
    #[error("zero element where a unit is required")]
    ZeroElement,
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),
    #[error("forms or elements live over different fields")]
    FieldMismatch,
    #[error("search space of {needed} points exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("minimal polynomial coefficient is not a polynomial function: {0}")]
    NonPolynomialCoefficient(String),
    #[error("no linear dependence among powers of the generic element: {0}")]
    DependenceNotFound(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("identity check failed: {0}")]
    IdentityFailed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
