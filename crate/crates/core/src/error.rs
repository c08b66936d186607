use thiserror::Error;

/// Crate-wide error type.
///
/// `Input` covers rejected data (unknown ids, malformed words, bad JSON),
/// `Budget` covers exhausted enumeration limits, and the remaining variants
/// carry operation-specific failures that callers may want to match on.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("budget exceeded: {resource} limit {limit}")]
    Budget { resource: String, limit: u64 },

    #[error("block map is undefined on window {0}")]
    PartialBlockMap(String),

    #[error("depth {depth} insufficient: {msg}")]
    DepthInsufficient { depth: usize, msg: String },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn budget(resource: impl Into<String>, limit: u64) -> Self {
        Error::Budget { resource: resource.into(), limit }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
