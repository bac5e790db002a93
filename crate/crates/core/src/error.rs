use std::fmt;

use chrono::NaiveDate;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse failure category, used by the command line to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Data,
    Numerical,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Config => 1,
            ErrorKind::Data => 2,
            ErrorKind::Numerical => 3,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("input is not valid UTF-8 (byte offset {offset})")]
    Encoding { offset: usize },

    #[error("{source_name}: header mismatch, expected [{expected}], found [{found}]")]
    Schema {
        source_name: String,
        expected: String,
        found: String,
    },

    #[error("{source_name}: {rejected} of {total} rows rejected, above the allowed rate {max_rate}")]
    TooManyRejects {
        source_name: String,
        rejected: usize,
        total: usize,
        max_rate: f64,
    },

    #[error("duplicate report id {0:?}")]
    DuplicateReportId(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("calendar does not cover {0}")]
    Coverage(String),

    #[error("no observation for {series} on {date}")]
    Gap { series: String, date: NaiveDate },

    #[error("{date} is outside the trading calendar")]
    OutOfRange { date: NaiveDate },

    #[error("{stock}: only {available} of {required} trading days of history before {date}")]
    History {
        stock: String,
        date: NaiveDate,
        available: usize,
        required: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no industry mapping for stock {0}")]
    Mapping(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("design matrix is rank deficient in column(s): {}", .columns.join(", "))]
    Singular { columns: Vec<String> },

    #[error("regression panel is empty after dropping incomplete rows")]
    EmptyPanel,

    #[error("{0}")]
    Parse(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Config(_) | Error::Coverage(_) | Error::Argument(_) => ErrorKind::Config,
            Error::Singular { .. } => ErrorKind::Numerical,
            _ => ErrorKind::Data,
        }
    }
}

/// A rejected input row. `line` is 1-based and counts the header.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct RowError {
    pub line: u64,
    pub message: String,
}

impl RowError {
    pub fn new(line: u64, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for RowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}
