use thiserror::Error;

pub type Result<T, E = BenchError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("matrix source unavailable: {0}")]
    MatrixSourceUnavailable(String),

    #[error("i/o error: {0}")]
    IoError(String),

    #[error("network error: {0}")]
    NetworkError(String),

    #[error("checksum mismatch for {name}: expected {expected}, got {got}")]
    ChecksumMismatch { name: String, expected: String, got: String },

    #[error(transparent)]
    Core(#[from] nystrom_core::Error),
}

impl BenchError {
    /// Identifier printed on stderr by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            BenchError::ConfigInvalid(_) => "ConfigInvalid",
            BenchError::MatrixSourceUnavailable(_) => "MatrixSourceUnavailable",
            BenchError::IoError(_) => "IoError",
            BenchError::NetworkError(_) => "NetworkError",
            BenchError::ChecksumMismatch { .. } => "ChecksumMismatch",
            BenchError::Core(e) => e.name(),
        }
    }
}

impl From<std::io::Error> for BenchError {
    fn from(e: std::io::Error) -> Self {
        BenchError::IoError(e.to_string())
    }
}

impl From<csv::Error> for BenchError {
    fn from(e: csv::Error) -> Self {
        BenchError::IoError(e.to_string())
    }
}
