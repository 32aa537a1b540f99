use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("series with zero constant term is not invertible")]
    NotInvertible,

    #[error("exp requires a series with zero constant term")]
    NonzeroConstantTerm,

    #[error("inverse square root requires constant term 1")]
    ConstantTermNotOne,

    #[error("series order {have} is below the required {needed}")]
    InsufficientOrder { needed: usize, have: usize },

    #[error("n!*[t^{n}] is not an integer, series is not an integer-sequence EGF")]
    NonIntegerCoefficient { n: usize },

    #[error("zero operator")]
    ZeroOperator,

    #[error("leading recurrence coefficient vanishes at n = {n}")]
    SingularUnroll { n: i64 },

    #[error("solved term a({n}) = {value} is not an integer")]
    NonIntegerTerm { n: i64, value: String },

    #[error("need at least {needed} initial terms, got {have}")]
    InsufficientInitial { needed: usize, have: usize },

    #[error("need at least {needed} terms, got {have}")]
    InsufficientTerms { needed: usize, have: usize },
}
