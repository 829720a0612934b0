use chromatope::{AlgebraError, CoverError, HexError, PolytopeError};
use serde_json::json;

/// A failed run: the error kind decides the exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Malformed(String),
    #[error("{0}")]
    Hypothesis(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Malformed(_) => "malformed_input",
            CliError::Hypothesis(_) => "hypothesis_violation",
            CliError::Io(_) => "io",
            CliError::Internal(_) => "internal",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Malformed(_) | CliError::Hypothesis(_) | CliError::Io(_) => 2,
            CliError::Internal(_) => 1,
        }
    }

    /// `{"error": {"kind", "message"}}`.
    pub fn envelope(&self) -> String {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } }).to_string()
    }
}

impl From<PolytopeError> for CliError {
    fn from(e: PolytopeError) -> Self {
        CliError::Malformed(e.to_string())
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::DepthExceeded { .. } | AlgebraError::TopRank(_) | AlgebraError::NotAGenerator(_) => {
                CliError::Internal(e.to_string())
            }
            AlgebraError::NotSimplexFacet { .. } | AlgebraError::WrongColorCount { .. } => {
                CliError::Hypothesis(e.to_string())
            }
            _ => CliError::Malformed(e.to_string()),
        }
    }
}

impl From<CoverError> for CliError {
    fn from(e: CoverError) -> Self {
        match e {
            CoverError::Hypothesis(_) => CliError::Hypothesis(e.to_string()),
            _ => CliError::Malformed(e.to_string()),
        }
    }
}

impl From<HexError> for CliError {
    fn from(e: HexError) -> Self {
        CliError::Malformed(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
