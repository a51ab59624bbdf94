use std::path::PathBuf;

use freqwalk_core::WalkError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 1 for bad input, 2 for numerical failures and I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Walk(e) if e.is_numerical() => 2,
            CliError::Walk(_) => 1,
            CliError::Io { .. } => 2,
        }
    }

    pub(crate) fn missing(field: &str, experiment: &str) -> Self {
        CliError::Config(format!("missing required field `{field}` for experiment `{experiment}`"))
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
