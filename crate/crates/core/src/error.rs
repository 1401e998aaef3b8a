use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: {0}")]
    Size(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("value {value} outside domain {domain}")]
    Domain { value: f64, domain: String },

    #[error("{name} = {value} outside valid range {range}")]
    Range { name: String, value: f64, range: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("scenario parse error: {0}")]
    Parse(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn range(name: &str, value: f64, range: impl Into<String>) -> Self {
        Error::Range {
            name: name.to_string(),
            value,
            range: range.into(),
        }
    }

    /// Wraps the error with a description of where it happened.
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, skipping context wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            e => e,
        }
    }

    /// True for failures caused by user input (bad files, parameters out of range).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self.root(),
            Error::Argument(_)
                | Error::Validation(_)
                | Error::Domain { .. }
                | Error::Range { .. }
                | Error::Parse(_)
                | Error::Io(_)
                | Error::Size(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(std::io::Error::other(e.to_string()))
    }
}
