use thiserror::Error;

/// Errors produced by the numerics, transform and reporting layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("capability exceeded: {0}")]
    Capability(String),

    #[error("invalid configuration: {0}")]
    Configuration(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported group kind for this operation: {0}")]
    Kind(String),

    #[error("degenerate signal: {0}")]
    Degenerate(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("grid resolution insufficient: {0}")]
    Resolution(String),

    #[error("base point not aligned with the signal grid: {0}")]
    Alignment(String),

    #[error("malformed data: {0}")]
    Format(String),

    #[error("i/o failure: {0}")]
    Io(String),

    #[error("inequality violated: {0}")]
    Inequality(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
