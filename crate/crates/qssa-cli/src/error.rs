use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad or missing flags. Reported with exit code 2.
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Model(#[from] qssa::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Input { path: String, message: String },

    #[error("grid has {points} points, more than the cap of {cap}")]
    GridTooLarge { points: usize, cap: usize },

    #[error("serialization failed: {0}")]
    Serialize(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "Usage",
            CliError::Model(e) => e.kind(),
            CliError::Io { .. } => "Io",
            CliError::Input { .. } => "Input",
            CliError::GridTooLarge { .. } => "GridTooLarge",
            CliError::Serialize(_) => "Serialize",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
