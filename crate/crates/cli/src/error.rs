use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Input {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: row {row}{}: {msg}", col.map(|c| format!(", column {c}")).unwrap_or_default())]
    Parse {
        path: PathBuf,
        row: usize,
        col: Option<usize>,
        msg: String,
    },

    #[error("{flag}: {source}")]
    Flag {
        flag: &'static str,
        #[source]
        source: hdcoint::Error,
    },

    #[error(transparent)]
    Core(#[from] hdcoint::Error),

    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 usage, 3 input data, 4 computation, 5 output.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Input { .. } | Self::Parse { .. } => 3,
            Self::Flag { .. } | Self::Core(_) => 4,
            Self::Output { .. } => 5,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Attaches the offending flag to a core error.
pub(crate) trait FlagContext<T> {
    fn flag(self, flag: &'static str) -> CliResult<T>;
}

impl<T> FlagContext<T> for hdcoint::Result<T> {
    fn flag(self, flag: &'static str) -> CliResult<T> {
        self.map_err(|source| CliError::Flag { flag, source })
    }
}
