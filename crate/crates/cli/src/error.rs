use openchain_core::bethe::BetheError;
use openchain_core::chain::{ChainError, SpectrumError};

/// Failures that stop a run before a report is written.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("Hilbert dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::DimensionCap { .. } => 3,
            _ => 2,
        }
    }
}

impl From<ChainError> for CliError {
    fn from(e: ChainError) -> Self {
        match e {
            ChainError::DimensionCap { dim, cap } => CliError::DimensionCap { dim, cap },
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<SpectrumError> for CliError {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::Chain(c) => c.into(),
            other => CliError::Unsupported(other.to_string()),
        }
    }
}

impl From<BetheError> for CliError {
    fn from(e: BetheError) -> Self {
        CliError::Unsupported(e.to_string())
    }
}
