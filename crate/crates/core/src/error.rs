use thiserror::Error;

/// Errors raised by operator construction and the numerical routines built on it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index ({row}, {col}) is outside the operator domain")]
    IndexOutOfDomain { row: i64, col: i64 },

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("operator document error at {field}: {message}")]
    Document { field: String, message: String },

    #[error("block size {block} is invalid: {reason}")]
    BlockSize { block: usize, reason: String },

    #[error("window of {cols} columns starting after column {start} leaves the column domain")]
    WindowOutOfDomain { start: i64, cols: usize },

    #[error("matrix shape {rows}x{cols} is not valid here: {reason}")]
    Shape {
        rows: usize,
        cols: usize,
        reason: String,
    },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("unknown task: {0}")]
    UnknownTask(String),

    #[error("invalid threshold: {0}")]
    Threshold(String),

    #[error("operation requires {expected}, got {found}")]
    WrongDomain { expected: String, found: String },

    #[error("operator has no periodic structure: {0}")]
    NotPeriodic(String),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
