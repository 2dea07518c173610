use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(
        "coefficient window mismatch: prec - val = {expected} but {actual} coefficients given"
    )]
    LengthMismatch { expected: i64, actual: usize },

    #[error("empty coefficient window (val = {val}, prec = {prec})")]
    EmptyWindow { val: i64, prec: i64 },

    #[error("coefficient of q^{exponent} requested but the series is only known to O(q^{prec})")]
    PastPrecision { exponent: i64, prec: i64 },

    #[error("insufficient precision: need {needed}, have {available}")]
    InsufficientPrecision { needed: i64, available: i64 },

    #[error("cannot invert a series with zero leading coefficient")]
    ZeroLeading,

    #[error("coefficient of q^{exponent} is not an integer")]
    NonIntegral { exponent: i64 },

    #[error("eta quotient is not integral at infinity: sum of d*e = {0} is not divisible by 24")]
    EtaNotIntegral(i64),

    #[error("invalid eta factor: scale must be positive, got {0}")]
    EtaScale(i64),

    #[error("invalid weight {0}")]
    InvalidWeight(i64),

    #[error("unsupported level {0}")]
    InvalidLevel(u32),

    #[error("no form f_{{{k},{m}}} exists (m must be at least {min})")]
    IndexBelowBound { k: i64, m: i64, min: i64 },

    #[error("(k, p) = ({k}, {p}) is not a table entry")]
    NotInTable { k: i64, p: u32 },

    #[error("index {j} out of range 1..={max}")]
    IndexOutOfRange { j: i64, max: i64 },

    #[error("unknown newform {0}")]
    UnknownNewform(String),

    #[error("elimination multiplier at q^{exponent} is not an integer")]
    NonIntegralMultiplier { exponent: i64 },

    #[error("decomposition remainder is nonzero at q^{exponent}")]
    RemainderNonzero { exponent: i64 },

    #[error("congruence window passed but coefficient of q^{exponent} is not divisible")]
    CongruenceViolation { exponent: i64 },

    #[error("series is not holomorphic at infinity (val = {0})")]
    NotHolomorphic(i64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
