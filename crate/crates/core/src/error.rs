use thiserror::Error;

/// Errors raised by the recovery library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Inputs disagree in size or are otherwise malformed.
    #[error("input error: {0}")]
    Input(String),

    /// A palette, sample space or observation model does not fit the requested operation.
    #[error("model error: {0}")]
    Model(String),

    /// `find_cycle` was asked for a cycle between identical assignments.
    #[error("no cycle exists: assignments are identical")]
    NoCycle,

    /// Exhaustive enumeration would exceed the configured cap.
    #[error("enumeration refused: {count:.3e} states exceed cap {cap}")]
    CapExceeded { count: f64, cap: u64 },

    /// A parameter lies outside its admissible range.
    #[error("parameter out of range: {0}")]
    Range(String),

    /// An iterative numerical kernel failed.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Configuration file or flag problem.
    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
