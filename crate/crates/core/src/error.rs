use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Syntax or semantic error while reading the DFA text format.
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid automaton: {0}")]
    InvalidDfa(String),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    /// A configured size limit would be exceeded; the operation refuses instead of
    /// approximating.
    #[error("{what}: requested {requested} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    #[error("automaton is not synchronizing")]
    NotSynchronizing,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn cap(what: &'static str, requested: impl Into<u128>, cap: impl Into<u128>) -> Self {
        Error::CapExceeded {
            what,
            requested: requested.into(),
            cap: cap.into(),
        }
    }
}
