use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid rational literal `{0}`")]
    ParseRational(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("malformed quiver: {0}")]
    Quiver(String),
    #[error("path is not a closed cycle: {0}")]
    NotACycle(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("mu = {0} is not generic for this dimension")]
    NonGeneric(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
