//! The `detkit` command line: problem files in, JSON reports out.

pub mod commands;
pub mod json;
pub mod problem;

use std::fmt;

pub use commands::{run, run_text, Command, Options, Report};
pub use problem::{parse_problem, ProblemSpec};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Usage(String),

    #[error("malformed certificate file: {0}")]
    Certificate(String),

    #[error(transparent)]
    Core(#[from] detkit_core::Error),
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Mathematical = 1,
    Usage = 2,
    ResourceCap = 3,
}

impl fmt::Display for Exit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", *self as i32)
    }
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Core(e) if e.is_mathematical() => Exit::Mathematical,
            CliError::Core(detkit_core::Error::ResourceCap(_)) => Exit::ResourceCap,
            _ => Exit::Usage,
        }
    }
}
