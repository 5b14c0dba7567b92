use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors are split into input validation failures (malformed data, schema
/// violations) and math-domain failures (a well-formed input outside the
/// domain of an operation). [`Error::is_validation`] tells them apart.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("expected {expected} parameters, found {found}")]
    BadParamCount { expected: usize, found: usize },

    #[error("zero rank: {0}")]
    ZeroRank(String),
    #[error("zero degree: {0}")]
    ZeroDegree(String),
    #[error("non-positive degree: {0}")]
    NonPositiveDegree(String),
    #[error("non-positive Euler characteristic: {0}")]
    NonPositiveEuler(String),
    #[error("degree mismatch: C.H = {ch} but C.H' = {ch_prime}")]
    DegreeMismatch { ch: String, ch_prime: String },
    #[error("destabilizer enumeration needs rank 2, got {0}")]
    BadRank(String),
    #[error("unsupported first Chern class: {0}")]
    UnsupportedC1(String),
    #[error("HN slope ladder is empty")]
    EmptyLadder,
    #[error("HN slopes must be strictly descending (position {0})")]
    NonDescending(usize),
    #[error("inadmissible segment endpoint: {0}")]
    InadmissibleEndpoint(String),
    #[error("irrational crossing: {0}")]
    IrrationalCrossing(String),
    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),
    #[error("family is not orthogonal to its class: {0}")]
    NotOrthogonal(String),
}

impl Error {
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::DimensionMismatch { .. }
                | Error::InvalidSurface(_)
                | Error::InvalidFamily(_)
                | Error::BadParamCount { .. }
        )
    }
}
