use std::fmt;

/// Stable machine-readable error codes. The string form is part of the
/// command-line contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorCode {
    Io,
    Schema,
    EmptyTree,
    DuplicateLabel,
    WeightSpec,
    InvalidRanks,
    UnknownTerm,
    ScaleOrder,
    MissingEvaluation,
    EvaluationOutOfBounds,
    ProfileOverlap,
    ProfileDominance,
    ProfileCount,
    Threshold,
    DimensionMismatch,
    UnknownNode,
    Infeasible,
    BoundaryViolation,
    Domain,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::Io => "IO",
            ErrorCode::Schema => "SCHEMA",
            ErrorCode::EmptyTree => "EMPTY_TREE",
            ErrorCode::DuplicateLabel => "DUPLICATE_LABEL",
            ErrorCode::WeightSpec => "WEIGHT_SPEC",
            ErrorCode::InvalidRanks => "INVALID_RANKS",
            ErrorCode::UnknownTerm => "UNKNOWN_TERM",
            ErrorCode::ScaleOrder => "SCALE_ORDER",
            ErrorCode::MissingEvaluation => "MISSING_EVALUATION",
            ErrorCode::EvaluationOutOfBounds => "EVALUATION_OUT_OF_BOUNDS",
            ErrorCode::ProfileOverlap => "PROFILE_OVERLAP",
            ErrorCode::ProfileDominance => "PROFILE_DOMINANCE",
            ErrorCode::ProfileCount => "PROFILE_COUNT",
            ErrorCode::Threshold => "THRESHOLD",
            ErrorCode::DimensionMismatch => "DIMENSION_MISMATCH",
            ErrorCode::UnknownNode => "UNKNOWN_NODE",
            ErrorCode::Infeasible => "INFEASIBLE",
            ErrorCode::BoundaryViolation => "BOUNDARY_VIOLATION",
            ErrorCode::Domain => "DOMAIN",
        }
    }

    /// Process exit status associated with the code.
    pub fn exit_status(self) -> i32 {
        match self {
            ErrorCode::Io => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Error carrying a code, an optional location inside the problem document,
/// and a human-readable message.
#[derive(Debug, Clone, PartialEq)]
pub struct Error {
    code: ErrorCode,
    path: Option<String>,
    message: String,
}

impl Error {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        Error { code, path: None, message: message.into() }
    }

    pub fn at(code: ErrorCode, path: impl Into<String>, message: impl Into<String>) -> Self {
        Error { code, path: Some(path.into()), message: message.into() }
    }

    pub fn with_path(mut self, path: impl Into<String>) -> Self {
        if self.path.is_none() {
            self.path = Some(path.into());
        }
        self
    }

    pub fn code(&self) -> ErrorCode {
        self.code
    }

    pub fn path(&self) -> Option<&str> {
        self.path.as_deref()
    }

    pub fn message(&self) -> &str {
        &self.message
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.path {
            Some(path) => write!(f, "{} at {}: {}", self.code, path, self.message),
            None => write!(f, "{}: {}", self.code, self.message),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::new(ErrorCode::Io, err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
