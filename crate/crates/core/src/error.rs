use std::fmt;

use thiserror::Error;

/// What went wrong on a single line of LIBSVM input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineErrorKind {
    BadLabel(String),
    UnknownLabel(String),
    MalformedToken(String),
    BadIndex(String),
    BadValue(String),
    NonIncreasingIndex { previous: usize, current: usize },
}

impl fmt::Display for LineErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineErrorKind::BadLabel(_) => write!(f, "bad label"),
            LineErrorKind::UnknownLabel(tok) => write!(f, "unknown label `{tok}`"),
            LineErrorKind::MalformedToken(tok) => write!(f, "malformed token `{tok}`"),
            LineErrorKind::BadIndex(tok) => write!(f, "bad feature index `{tok}`"),
            LineErrorKind::BadValue(tok) => write!(f, "bad feature value `{tok}`"),
            LineErrorKind::NonIncreasingIndex { previous, current } => write!(
                f,
                "non-increasing feature index {current} after {previous}"
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite vector")]
    NonFinite,

    #[error("schedules are defined for t ≥ 1")]
    ZeroStep,

    #[error("iterate index mismatch: expected {expected}, got {got}")]
    IndexMismatch { expected: u64, got: u64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{kind} at line {line}")]
    Parse { line: usize, kind: LineErrorKind },

    #[error("dataset has no samples")]
    EmptyDataset,

    #[error("cannot average an empty iterate sequence")]
    EmptySequence,

    #[error("bias term already added")]
    BiasAlreadyAdded,

    #[error("dataset already standardized")]
    AlreadyStandardized,

    #[error("non-finite iterate at t={t}")]
    Divergence { t: u64 },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
