use thiserror::Error;

use crate::instance::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("generation failed for {kind} {width}x{height} (seed {seed}) after {attempts} attempts: {reason}")]
    Generation {
        kind: &'static str,
        width: usize,
        height: usize,
        seed: u64,
        attempts: usize,
        reason: String,
    },

    #[error("protocol error [{code}]: {message}")]
    Protocol { code: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
