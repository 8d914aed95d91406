//! Library side of the command-line tool: sweep execution, bound fuzzing,
//! single-state analysis, and figure emission. The binary in `main.rs` is a
//! thin argument-parsing layer over these.

use thiserror::Error;

pub mod analyze;
pub mod config;
pub mod fuzz;
pub mod plot;
pub mod sweep;

/// CLI-level failures, mapped onto process exit codes: usage errors exit 1,
/// I/O errors exit 3 (fuzz violations exit 2 but are not errors).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("malformed CSV: {0}")]
    MalformedCsv(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::MalformedCsv(_) => 1,
            CliError::Io(_) => 3,
        }
    }
}
