use std::path::{Path, PathBuf};

use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot parse configuration: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("cannot write configuration: {0}")]
    TomlWrite(#[from] toml::ser::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    ProfileFile { path: PathBuf, line: usize, msg: String },
    #[error(transparent)]
    Core(#[from] radhj::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Short machine-readable category for error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) | CliError::Toml(_) | CliError::TomlWrite(_) => "config",
            CliError::Io { .. } => "io",
            CliError::ProfileFile { .. } => "profile_file",
            CliError::Core(radhj::Error::BlowUp { .. }) => "blow_up",
            CliError::Core(radhj::Error::Newton { .. }) => "newton",
            CliError::Core(_) => "numerics",
            CliError::Json(_) => "json",
            CliError::Usage(_) => "usage",
        }
    }

    pub fn to_record(&self) -> ErrorRecord {
        ErrorRecord {
            schema: crate::io::SCHEMA,
            kind: self.kind(),
            message: self.to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub schema: u32,
    pub kind: &'static str,
    pub message: String,
}

pub type CliResult<T> = std::result::Result<T, CliError>;
