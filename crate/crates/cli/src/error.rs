use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors carrying enough context to name the offending file, field, or
/// pipeline stage. Validation problems exit with code 2, runtime stage
/// failures with code 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{}:{line}: {message}", path.display())]
    ParseFile {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("manifest {}: {message}", path.display())]
    ManifestParse { path: PathBuf, message: String },

    #[error("manifest field {field}: {message}")]
    ManifestField { field: String, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("stage {stage} failed on video {video}: {message}")]
    Stage {
        stage: &'static str,
        video: String,
        message: String,
    },

    #[error(transparent)]
    Core(#[from] pointseg_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Stage { .. } | CliError::Write { .. } => 3,
            _ => 2,
        }
    }

    pub(crate) fn stage(stage: &'static str, video: &str, err: impl std::fmt::Display) -> Self {
        CliError::Stage {
            stage,
            video: video.to_string(),
            message: err.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
