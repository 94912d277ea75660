use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("{}: {source}", path.display())]
    InFile { path: PathBuf, source: Box<Error> },

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Core(#[from] spikecomm_core::Error),

    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn parse(line: u64, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }

    /// 1 for bad invocations or parameters, 2 for bad or unreadable data.
    pub fn exit_code(&self) -> i32 {
        use spikecomm_core::Error as Core;
        match self {
            Error::Usage(_) => 1,
            Error::Core(Core::InvalidParameter(_) | Core::DriveTooWeak { .. } | Core::Infeasible { .. }) => 1,
            Error::InFile { source, .. } => source.exit_code(),
            _ => 2,
        }
    }
}
