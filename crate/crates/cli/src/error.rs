use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] sfstkit::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Parse {
        path: PathBuf,
        #[source]
        source: sfstkit::Error,
    },
}

impl CliError {
    /// 1 usage, 2 data or consistency, 3 resource exhaustion.
    pub fn exit_code(&self) -> u8 {
        use sfstkit::Error as E;
        match self {
            CliError::Core(E::InvalidConfig(_) | E::InvalidArgument(_)) => 1,
            CliError::Core(E::GenerationExhausted { .. } | E::WalkExhausted { .. }) => 3,
            CliError::Core(_) | CliError::Io { .. } | CliError::Parse { .. } => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
