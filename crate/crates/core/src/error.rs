use thiserror::Error;

use crate::construct::DuplicateReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification of [`Error`], used by callers that only care about
/// which family a failure belongs to (exit codes, fuzzing oracles).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorClass {
    Schema,
    Validity,
    Precondition,
    Unsupported,
    Gap,
    TypedResult,
    Parse,
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),

    #[error("{}", describe_duplicates(.0))]
    Duplicated(Box<DuplicateReport>),

    #[error("validity error: {0}")]
    Validity(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{0}; make implicit gaps explicit with fill_gaps first")]
    Gaps(String),

    #[error("typed result error at position {position}: expected {expected}, found {found}")]
    TypedResult {
        position: usize,
        expected: &'static str,
        found: &'static str,
    },

    #[error("parse error at row {row}, column `{column}`: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error("invalid index adapter `{kind}`: {message}")]
    Adapter { kind: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Schema(_) => ErrorClass::Schema,
            Error::Duplicated(_) | Error::Validity(_) => ErrorClass::Validity,
            Error::Precondition(_) => ErrorClass::Precondition,
            Error::Unsupported(_) | Error::Adapter { .. } => ErrorClass::Unsupported,
            Error::Gaps(_) => ErrorClass::Gap,
            Error::TypedResult { .. } => ErrorClass::TypedResult,
            Error::Parse { .. } => ErrorClass::Parse,
            Error::Io(_) => ErrorClass::Io,
            Error::Csv(e) => {
                if e.is_io_error() {
                    ErrorClass::Io
                } else {
                    ErrorClass::Parse
                }
            }
        }
    }

    /// The duplicate report carried by a uniqueness failure, if any.
    pub fn duplicates(&self) -> Option<&DuplicateReport> {
        match self {
            Error::Duplicated(report) => Some(report),
            _ => None,
        }
    }

    pub(crate) fn schema(msg: impl Into<String>) -> Self {
        Error::Schema(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

fn describe_duplicates(report: &DuplicateReport) -> String {
    match report.first_pair() {
        Some((label, first, second)) => format!(
            "validity error: duplicated (key, index) pair {label} in rows {} and {} \
             ({} rows involved); use duplicates() to inspect them",
            first + 1,
            second + 1,
            report.len()
        ),
        None => "validity error: duplicated (key, index) pairs".to_owned(),
    }
}
