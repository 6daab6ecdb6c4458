use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Problem with a specific field of a scheme file, e.g. `keys[1].prob`.
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qindist_core::Error),
}

impl CliError {
    pub(crate) fn field(path: impl Into<String>, message: impl ToString) -> Self {
        CliError::Field {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
