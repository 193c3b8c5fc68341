use thiserror::Error;

/// Errors produced by graph construction, network execution, routing and
/// verification.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("parse error at stage {stage}: {reason}")]
    Stage { stage: usize, reason: String },
    #[error("routing task error: {0}")]
    Task(String),
    #[error("graph mismatch: {0}")]
    GraphMismatch(String),
    #[error("refused: n = {n} exceeds the cap of {cap} for {what}")]
    Cap { n: usize, cap: usize, what: &'static str },
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
