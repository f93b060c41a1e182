use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("degenerate loading step {step}: remaining weight {gamma:e} is not positive")]
    DegenerateStep { step: usize, gamma: f64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("eigensolver did not converge: residual {residual:e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// True for errors caused by malformed or inconsistent user input.
    pub fn is_input(&self) -> bool {
        matches!(
            self,
            Error::Input(_) | Error::Parse { .. } | Error::Json(_) | Error::DegenerateStep { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
