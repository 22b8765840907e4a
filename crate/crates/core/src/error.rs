use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the boolforge library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid variable count {n}: {reason}")]
    InvalidVariableCount { n: usize, reason: &'static str },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("cannot parse truth table: {0}")]
    TruthTableParse(String),

    #[error("value {value} is outside the unit interval")]
    OutOfUnitInterval { value: f64 },

    #[error("invalid float encoding: {0}")]
    FloatEncoding(String),

    #[error("cannot parse syntax tree: {0}")]
    TreeParse(String),

    #[error("invalid syntax tree: {0}")]
    InvalidTree(String),

    #[error("unbound variable x{0} in tree evaluation")]
    UnboundVariable(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("population of {0} individuals is too small for a 3-tournament")]
    PopulationTooSmall(usize),

    #[error("operation requires a bitstring genotype")]
    NotBitstring,

    #[error("no records to summarize")]
    EmptyRecords,

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
