use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] spcodes_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 1 verification failure, 2 bad input, 3 unsupported scale.
    pub fn exit_code(&self) -> u8 {
        use spcodes_core::Error as E;
        match self {
            CliError::Core(E::Invariant { .. }) => 1,
            CliError::Core(E::UnsupportedScale(_)) => 3,
            CliError::Core(_) => 2,
            CliError::Io { .. } => 2,
        }
    }
}
