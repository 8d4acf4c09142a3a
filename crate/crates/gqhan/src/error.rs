use std::path::PathBuf;

/// Errors of the data pipeline and the command runner. Each variant maps to
/// a process exit code via [`Error::exit_code`].
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("ingestion error: {0}")]
    Ingest(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] gqhan_core::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 configuration, 3 ingestion, 4 numerical, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        use gqhan_core::Error as Core;
        match self {
            Error::Config(_) | Error::Core(Core::Config(_)) | Error::Core(Core::Circuit(_)) => 2,
            Error::Ingest(_) | Error::Core(Core::Encoding(_)) => 3,
            Error::Numerical(_) | Error::Core(Core::Numerical(_)) => 4,
            Error::Io { .. } | Error::Csv(_) | Error::Json(_) => 1,
        }
    }
}
