use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong inside the library.
///
/// Budget errors carry the degrees that were completed before the limit hit,
/// so callers can still report a partial table.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),
    #[error("incompatible fields: F_{0} vs F_{1}")]
    IncompatibleField(u32, u32),
    #[error("invalid complex: d∘d ≠ 0 at degree {degree}")]
    InvalidComplex { degree: i64 },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("cannot truncate at degree {0}: it sits on an open window edge")]
    IndeterminateTruncation(i64),
    #[error("budget exceeded: {what}; completed through degree {completed:?}")]
    Budget { what: String, completed: Option<i64> },
    #[error("invalid category or functor: {0}")]
    InvalidFunctor(String),
    #[error("invalid projection to [1]: {0}")]
    InvalidProjection(String),
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
    #[error("inadmissible family: {0}")]
    InadmissibleFamily(String),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("missing cyclic structure: {0}")]
    MissingCyclic(String),
    #[error("unsupported characteristic: {0}")]
    UnsupportedCharacteristic(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("validation failed: {0}")]
    Validation(String),
}

impl Error {
    pub fn budget(what: impl Into<String>) -> Error {
        Error::Budget { what: what.into(), completed: None }
    }
}
