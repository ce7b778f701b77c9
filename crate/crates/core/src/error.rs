use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MzvError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not invertible modulo {0}")]
    NotInvertible(String),
    #[error("not a monic irreducible polynomial: {0}")]
    InvalidPrime(String),
    #[error("invalid field specification: {0}")]
    InvalidField(String),
    #[error("mixed moduli in residue arithmetic: {0} vs {1}")]
    MixedModulus(String, String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cap {cap} too small to certify the vanishing degree of S_d(-{m})")]
    CapTooSmall { m: u64, cap: usize },
    #[error("invalid family input: {0}")]
    InvalidFamilyInput(String),
    #[error("invalid evaluator: {0}")]
    InvalidEvaluator(String),
    #[error("invalid search scope: {0}")]
    InvalidScope(String),
    #[error("relation refers to tuples outside the scope: {0}")]
    ScopeMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("doubling law h(d,2s) = h(d,s)^2 violated at d = {d}, s = {s}")]
    DoublingLawViolated { d: i64, s: i64 },
}

pub type Result<T, E = MzvError> = std::result::Result<T, E>;
