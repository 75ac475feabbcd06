use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("{0} requires a nonzero argument")]
    Zero(&'static str),
    #[error("[0:0] is not a point of the projective line")]
    ZeroPoint,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("inexact division of binary forms")]
    InexactDivision,
    #[error("the zero form has no well-defined root set")]
    ZeroForm,
    #[error("degenerate map: numerator and denominator share a common factor")]
    DegenerateMap,
    #[error("map degree {0} is below 2")]
    DegreeTooSmall(usize),
    #[error("point {point} does not have period {period}")]
    NotPeriodic { point: String, period: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("portrait exceeded the safety cap of {0} points")]
    PortraitCap(usize),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
