use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point {0} is not in the table domain")]
    PointNotInDomain(String),

    #[error("concept index {index} out of range for a class of {size} concepts")]
    ConceptOutOfRange { index: usize, size: usize },

    #[error("concept kind does not match the class")]
    ConceptKindMismatch,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("too many points for exhaustive shatter check: {0} (limit 30)")]
    TooManyPoints(usize),

    #[error("domain too large: {size} points (limit {limit})")]
    DomainTooLarge { size: usize, limit: usize },

    #[error("candidate universe is empty")]
    EmptyUniverse,

    #[error("concept class is empty")]
    EmptyClass,

    #[error("cover is empty")]
    EmptyCover,

    #[error("sample is inconsistent with every projection")]
    InconsistentSample,

    #[error("sample is not self-consistent: point {0} carries both labels")]
    NotSelfConsistent(String),

    #[error("malformed joint table: {0}")]
    MalformedTable(String),

    #[error("no exact error oracle for {0}")]
    OracleUnavailable(String),

    #[error("sample-complexity search exceeded m_max = {m_max} without reaching the target")]
    SearchExhausted { m_max: usize },

    #[error("value {0} exceeds 1")]
    ValueAboveOne(f64),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
