use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read config {}: {source}", path.display())]
    ReadConfig { path: PathBuf, source: std::io::Error },
    #[error("invalid config {}: {message}", path.display())]
    ParseConfig { path: PathBuf, message: String },
    #[error("invalid config: {0}")]
    Invalid(ssbloc::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Simulation(ssbloc::Error),
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error("cannot encode {}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ReadConfig { .. } | CliError::ParseConfig { .. } | CliError::Invalid(_) | CliError::Usage(_) => {
                EXIT_CONFIG
            }
            CliError::Simulation(_) | CliError::Io { .. } | CliError::Csv { .. } | CliError::Json { .. } => {
                EXIT_RUNTIME
            }
        }
    }
}

/// Configuration-shaped library errors are the user's to fix; the rest are
/// runtime failures.
impl From<ssbloc::Error> for CliError {
    fn from(e: ssbloc::Error) -> Self {
        match e {
            ssbloc::Error::Config(_) | ssbloc::Error::Usage(_) | ssbloc::Error::Lookup(_) => CliError::Invalid(e),
            other => CliError::Simulation(other),
        }
    }
}
