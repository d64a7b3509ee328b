use thiserror::Error;

use crate::primes::PrimeClass;

#[derive(Debug, Error)]
pub enum Error {
    #[error("valuation of zero is undefined")]
    ZeroArgument,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("base must be at least 2, got {0}")]
    InvalidBase(u64),

    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("digit {digit} is out of range for base {base}")]
    InvalidDigit { digit: u64, base: u64 },

    #[error("value does not fit in 64 bits")]
    Overflow,

    #[error("prime {p} belongs to class {actual:?}, expected {expected}")]
    WrongClass {
        p: u64,
        actual: PrimeClass,
        expected: &'static str,
    },

    #[error("prime {p} has nu_p(F_alpha(p)) = {val_at_alpha}, the construction needs 1")]
    WallHypothesis { p: u64, val_at_alpha: u32 },

    #[error("hypothesis not satisfied: {0}")]
    Precondition(String),

    #[error("invariance violated: nu_{p}(F_{n}) = {lhs} but nu_{p}(F_{m}) = {rhs}")]
    InvarianceViolated {
        p: u64,
        n: u64,
        m: u64,
        lhs: u32,
        rhs: u32,
    },

    #[error("malformed representation: {0}")]
    InvalidRepresentation(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
