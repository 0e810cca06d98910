use std::path::PathBuf;

use mopef_core::InstanceViolation;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read `{path}`: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write `{path}`: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON in `{path}`: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("invalid instance: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidInstance(Vec<InstanceViolation>),
    #[error(transparent)]
    Core(#[from] mopef_core::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Process exit code: 2 for usage errors, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Read { .. } | Self::Write { .. } => "io",
            Self::Json { .. } => "json",
            Self::InvalidInstance(_) => "invalid-instance",
            Self::Core(_) => "domain",
            Self::Csv(_) => "csv",
            Self::Usage(_) => "usage",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut error = serde_json::json!({ "kind": self.kind(), "message": self.to_string() });
        let violations = match self {
            Self::InvalidInstance(v) => Some(v.as_slice()),
            Self::Core(mopef_core::Error::InvalidInstance(v)) => Some(v.as_slice()),
            _ => None,
        };
        if let Some(v) = violations {
            error["violations"] = serde_json::to_value(v).unwrap_or_default();
        }
        serde_json::json!({ "error": error })
    }
}

pub type CliResult<T> = Result<T, CliError>;
