use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("elements belong to different target models")]
    ModelMismatch,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("homotopy table has no entry for pi_{{{n}+{k}}}(S^{n})")]
    MissingEntry { n: u32, k: u32 },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
