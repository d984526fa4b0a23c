use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },

    /// A gap closes on the requested grid; names the momentum and both models.
    #[error("{source} (initial: {initial}, final: {post})")]
    Degenerate {
        source: dqpt_core::Error,
        initial: String,
        post: String,
    },

    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] dqpt_core::Error),
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            context: path.display().to_string(),
            source,
        }
    }

    /// 2 config, 3 degenerate mode, 4 IO, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        use dqpt_core::Error as E;
        match self {
            CliError::Config { .. } => 2,
            CliError::Degenerate { .. } => 3,
            CliError::Io { .. } => 4,
            CliError::Core(e) if e.is_degenerate() => 3,
            CliError::Core(E::Io(_)) => 4,
            CliError::Core(E::InvalidArgument(_) | E::InvalidTable(_) | E::Json(_) | E::Csv(_)) => {
                2
            }
            CliError::Core(_) => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
