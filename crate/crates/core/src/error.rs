use thiserror::Error;

/// Errors raised across the library. The CLI maps every variant to exit code 1
/// except verification failures, which are reported through their own channel.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid range: lo = {lo} > hi = {hi}")]
    InvalidRange { lo: u64, hi: u64 },

    #[error("range must start at 2 or above (got lo = {0})")]
    RangeStart(u64),

    #[error("resultant of two zero polynomials is undefined")]
    ZeroPolynomials,

    #[error("division by zero")]
    DivisionByZero,

    #[error("prime {p} is too small for this operation (need p >= {min})")]
    PrimeTooSmall { p: u64, min: u64 },

    #[error("prime {p} is bad for this surface ({reason})")]
    BadPrime { p: u64, reason: String },

    #[error("point is not on the curve")]
    NotOnCurve,

    #[error("{what} must be positive (got {value})")]
    NonPositive { what: &'static str, value: i64 },

    #[error("{what} must be non-negative (got {value})")]
    Negative { what: &'static str, value: i64 },

    #[error("parse error in `{input}`: {message}")]
    Parse { input: String, message: String },

    #[error("invalid surface definition: {0}")]
    InvalidSpec(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("classification failed at {place}: {message}")]
    Classification { place: String, message: String },

    #[error("enumeration budget exceeded ({needed} > {budget}); use the content method instead")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("input is not a group: {0}")]
    NotAGroup(String),

    #[error("insufficient samples: {got} primes (need at least {need})")]
    InsufficientSamples { got: usize, need: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("n = {n} shares a factor with p = {p}")]
    NotCoprime { n: u64, p: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
