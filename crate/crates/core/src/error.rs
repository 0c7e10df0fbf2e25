use thiserror::Error;

/// Everything that can go wrong inside the engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input outside the domain of the operation (separating pairs fed to a
    /// perpendicular solver, tuples with a triple entry, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// Points too close to each other or to the chart base to evaluate reliably.
    #[error("precision error: {0}")]
    Precision(String),
    /// A monotone solve found no sign change; the structure violates its axioms.
    #[error("structure violation: {0}")]
    Structure(String),
    /// Invalid configuration value.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// Graph queries on missing or disconnected vertices.
    #[error("graph error: {0}")]
    Graph(String),
    /// Malformed zigzag path.
    #[error("invalid path: {0}")]
    Path(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
