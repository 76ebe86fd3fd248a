use thiserror::Error;

/// Crate-wide error type.
///
/// `Config` maps to exit code 2 (the input was never runnable); everything
/// else maps to exit code 1 (a run failed after starting).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("task error: {0}")]
    Task(String),
    #[error("run failed: {0}")]
    Runtime(String),
    #[error(transparent)]
    Core(#[from] mopbt_core::CoreError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed run log: {0}")]
    Log(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code this error maps to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
