//! Library side of the `qsprep` command: file I/O, exit codes and the
//! fidelity-versus-gate-count benchmark.

pub mod bench;
pub mod io;

use std::fmt;

/// Failure classes with their process exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Valid run that did not reach its goal.
    Unreached(String),
    Input(String),
    Consistency(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Unreached(_) => 1,
            Failure::Input(_) => 2,
            Failure::Consistency(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Unreached(m) => write!(f, "unreached: {m}"),
            Failure::Input(m) => write!(f, "input error: {m}"),
            Failure::Consistency(m) => write!(f, "consistency failure: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

impl From<qsprep::Error> for Failure {
    fn from(e: qsprep::Error) -> Self {
        match e {
            qsprep::Error::Consistency(_) | qsprep::Error::NoConvergence { .. } => Failure::Consistency(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;
