//! Crate-wide error type.
//!
//! Errors are split along the lines callers care about: `ResourceBound`
//! signals a desk-scale limit (and carries the smallest feasible parameter
//! when it is known), `WindowExhausted` signals that a finite word ran out
//! mid-computation, and the remaining variants are ordinary domain errors.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A configured cap was exceeded. `feasible` names the smallest
    /// parameter that would make the request succeed, when known.
    ResourceBound {
        what: String,
        requested: String,
        feasible: String,
    },
    /// An index or length precondition failed.
    Bounds { what: String },
    /// A finite word window ran out while a larger radius was needed.
    WindowExhausted { needed: String },
    /// A query about a correction stage that was never performed.
    StageNotCorrected { stage: u32 },
    /// A Q-matrix row was referenced before its P word is determined.
    UndeterminedRow { row: u64, depth: u32 },
    /// An expectation hypothesis (positive, finite) failed.
    DegenerateMeasure { why: String },
    /// Unsupported combination of inputs.
    Unsupported { what: String },
    /// File format violation.
    Format { what: String },
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ResourceBound {
                what,
                requested,
                feasible,
            } => write!(
                f,
                "resource bound: {what} (requested {requested}, feasible {feasible})"
            ),
            Error::Bounds { what } => write!(f, "out of bounds: {what}"),
            Error::WindowExhausted { needed } => {
                write!(f, "word window exhausted: needs {needed}")
            }
            Error::StageNotCorrected { stage } => {
                write!(f, "stage {stage} was not corrected in this prefix")
            }
            Error::UndeterminedRow { row, depth } => {
                write!(f, "row {row} is undetermined at construction depth {depth}")
            }
            Error::DegenerateMeasure { why } => write!(f, "degenerate measure: {why}"),
            Error::Unsupported { what } => write!(f, "unsupported: {what}"),
            Error::Format { what } => write!(f, "format error: {what}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceBound { .. } => 3,
            _ => 1,
        }
    }
}
