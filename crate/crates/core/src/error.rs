use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("measure needs at least one atom")]
    EmptyMeasure,
    #[error("{points} points but {weights} weights")]
    LengthMismatch { points: usize, weights: usize },
    #[error("weight {0} is negative")]
    NegativeWeight(f64),
    #[error("weights sum to {0}, expected 1")]
    WeightsNotNormalized(f64),
    #[error("point {point} outside [0, {upper}]")]
    PointOutOfRange { point: f64, upper: f64 },
    #[error("interval endpoint {0} must be finite and positive")]
    InvalidUpper(f64),
    #[error("non-finite value {0}")]
    NonFinite(f64),
    #[error("quantile level {0} outside [0, 1]")]
    QOutOfRange(f64),
    #[error("measures live on [0, {0}] and [0, {1}]")]
    MismatchedInterval(f64, f64),
    #[error("{what} = {value} outside [0, {upper}]")]
    OutOfRange { what: &'static str, value: f64, upper: f64 },
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("support point {0} is not an integer")]
    NonIntegerSupport(f64),
    #[error("capped policy only applies to ski rental")]
    CappedOnNonSki,
    #[error("invalid policy: {0}")]
    InvalidPolicy(String),
    #[error("eps must be positive, got {0}")]
    EpsNonPositive(f64),
    #[error("eps = {eps} too large: {reason}")]
    EpsTooLarge { eps: f64, reason: String },
    #[error("unknown adversarial family `{0}`")]
    UnknownName(String),
    #[error("missing or invalid parameter `{0}`")]
    BadParam(String),
    #[error("need integers 2 <= b <= M - 1, got b = {b}, M = {m}")]
    InvalidBRange { b: f64, m: f64 },
    #[error("scan would enumerate {pairs} pairs, cap is {cap}")]
    GridTooLarge { pairs: u128, cap: u128 },
    #[error("invalid scan grid: {0}")]
    InvalidGrid(String),
    #[error("no analytic bound for {0}")]
    NoBoundInPaper(String),
    #[error("Bernstein degree must be at least 1")]
    DegreeZero,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
