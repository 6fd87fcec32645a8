use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite coordinate at index {index}")]
    NonFinite { index: usize },

    #[error("point must have at least one coordinate")]
    EmptyPoint,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("no bounded sampler for {0}; supply an explicit sampling region")]
    SamplerUnavailable(&'static str),

    #[error("operator has no known fixed-point set")]
    MissingFixedSet,

    #[error("known fixed-point sets do not intersect")]
    EmptyIntersection,

    #[error("iterate x_{n} left the domain (distance {distance:e})")]
    DomainEscape { n: usize, distance: f64 },

    #[error("{which} is outside the operator domain (distance {distance:e})")]
    OutsideDomain { which: &'static str, distance: f64 },

    #[error("inner fixed-point solve for t = {t} did not settle within {steps} steps")]
    InnerLoopExhausted { t: f64, steps: usize },

    #[error("schedule check failed: {0}")]
    Schedule(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
