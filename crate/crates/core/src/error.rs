use thiserror::Error;

use crate::characteristic::Characteristic;
use crate::expr::ExprError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed rational `{0}` (expected `a/b` or an integer)")]
    Rational(String),
    #[error("malformed characteristic `{0}` (expected `a/b,c/d`)")]
    Characteristic(String),
    #[error("malformed tau `{0}` (expected `a+bi`)")]
    Tau(String),
    #[error("malformed expression: {0}")]
    Expression(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("Im tau = {0} is not positive")]
    NotUpperHalfPlane(f64),
    #[error("Im tau = {im} is below the supported minimum {min}")]
    ImaginaryPartTooSmall { im: f64, min: f64 },
    #[error("series needs more than {max} terms per side to reach the requested tolerance")]
    TruncationExceeded { max: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("{0} is divisible by 3; orbits do not partition P({0})")]
    DivisibleByThree(u64),
    #[error("partition needs p >= 2, got {0}")]
    TooSmall(u64),
    #[error("{0} is not a proper fraction in [0, 1)")]
    NotProper(String),
    #[error("orbit did not close within {0} steps")]
    IterationCap(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    /// The coefficient `3θ[3c]` of the wanted derivative vanishes.
    #[error(
        "theta'[{target}] cannot be obtained from the fundamental identity: \
         its coefficient 3 theta[{image}] vanishes identically"
    )]
    DegenerateIdentity {
        target: Box<Characteristic>,
        image: Box<Characteristic>,
    },
    #[error("period {period} exceeds the configured cap {cap}")]
    PeriodTooLarge { period: usize, cap: usize },
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}
