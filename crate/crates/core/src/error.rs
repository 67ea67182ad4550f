use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{msg}, line {line}")]
    Parse { line: usize, msg: String },

    #[error("invalid decomposition: {0}")]
    Decomposition(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("weight overflow")]
    Overflow,

    #[error("time limit exceeded")]
    Timeout,

    #[error("over oracle budget: {0}")]
    Budget(String),

    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
