use thiserror::Error;

use crate::gen_agony::InfeasibleCycle;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown timestamp {0}")]
    UnknownTimestamp(i64),

    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),

    #[error("hard constraints are infeasible: {0}")]
    Infeasible(InfeasibleCycle),

    #[error("search space of {0} points exceeds the brute-force limit")]
    SearchTooLarge(u128),

    #[error("truth assignment does not satisfy clause {0}")]
    Unsatisfied(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
