use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("unsupported field exponent m = {0} (expected 1 <= m <= 16)")]
    UnsupportedDegree(u32),

    #[error("polynomial {0:#x} is not irreducible of degree m over GF(2)")]
    ReducibleBase(u32),

    #[error("extension polynomial is not a monic irreducible cubic over GF(2^m)")]
    ReducibleExtension,

    #[error("malformed element encoding {0:?}")]
    Encoding(String),

    #[error("polynomials live over different fields")]
    FieldMismatch,

    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,

    #[error("variable {0} does not occur linearly")]
    NotLinear(&'static str),

    #[error("polynomial involves {0}; only X0, Y0, Y1, Y2 may appear")]
    UnexpectedVariable(&'static str),

    #[error("parameters must be nonzero")]
    ZeroParameter,

    #[error("elimination step `{step}` failed: {reason}")]
    Elimination { step: String, reason: String },

    #[error("budget exceeded: {predicted} predicted evaluations, limit {limit}")]
    Budget { predicted: u128, limit: u128 },

    #[error("invalid field specification: {0}")]
    FieldSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
