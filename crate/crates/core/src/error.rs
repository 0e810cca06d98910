use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::analytic::{EvalError, ParseError};

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// One broken invariant of a raw instance.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum InstanceViolation {
    TooFewObjectives { p: usize },
    NoPoints,
    DuplicateLabel { label: String },
    LengthMismatch { label: String, expected: usize, found: usize },
    NonFinite { label: String, index: usize },
}

impl fmt::Display for InstanceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TooFewObjectives { p } => {
                write!(f, "at least two objectives are required (p = {p})")
            }
            Self::NoPoints => f.write_str("instance has no points"),
            Self::DuplicateLabel { label } => write!(f, "duplicate label `{label}`"),
            Self::LengthMismatch { label, expected, found } => write!(
                f,
                "point `{label}` has {found} objective values, expected {expected}"
            ),
            Self::NonFinite { label, index } => {
                write!(f, "point `{label}` has a non-finite value at index {index}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("objective vectors need at least two finite entries")]
    InvalidVector,
    #[error("invalid instance: {}", join(.0))]
    InvalidInstance(Vec<InstanceViolation>),
    #[error("unknown point label `{0}`")]
    UnknownLabel(String),
    #[error("utopia shift must be positive, got {0}")]
    NonPositiveShift(f64),
    #[error("delta must be nonnegative, got {0}")]
    NegativeDelta(f64),
    #[error("invalid scalarization spec: {0}")]
    InvalidSpec(String),
    #[error("invalid parameter grid: {0}")]
    InvalidGrid(String),
    #[error("invalid transform: {0}")]
    InvalidTransform(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid sampling request: {0}")]
    Sampling(String),
    #[error("invalid refinement schedule: {0}")]
    Schedule(String),
    #[error("{context}: {source}")]
    Eval {
        context: String,
        #[source]
        source: EvalError,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    pub(crate) fn eval(context: impl Into<String>, source: EvalError) -> Self {
        Self::Eval { context: context.into(), source }
    }
}

fn join(violations: &[InstanceViolation]) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    for (k, v) in violations.iter().enumerate() {
        if k > 0 {
            out.push_str("; ");
        }
        let _ = write!(out, "{v}");
    }
    out
}
