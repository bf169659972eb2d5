//! Command-line front end for `indalg`: JSON jobs in, text or JSON reports out.

use std::fmt;

use serde_json::Value;

pub mod commands;
pub mod job;
mod render;

pub use job::{Job, MatrixDocument};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_BAD_INPUT: i32 = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// The job document is malformed; `pointer` names the offending field.
    Input { pointer: String, message: String },
    Internal(String),
}

impl CliError {
    pub fn input(pointer: &str, message: impl Into<String>) -> Self {
        CliError::Input {
            pointer: pointer.to_string(),
            message: message.into(),
        }
    }

    pub fn internal(message: impl fmt::Display) -> Self {
        CliError::Internal(message.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } => EXIT_BAD_INPUT,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Input { pointer, message } => serde_json::json!({
                "error": {"kind": "bad_input", "pointer": pointer, "message": message}
            }),
            CliError::Internal(message) => serde_json::json!({
                "error": {"kind": "internal", "message": message}
            }),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input { pointer, message } => write!(f, "bad input at {pointer}: {message}"),
            CliError::Internal(message) => write!(f, "internal error: {message}"),
        }
    }
}

impl std::error::Error for CliError {}

/// A finished command: the structured report, its text rendering and the
/// process exit status.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub text: String,
    pub exit: i32,
}

/// Parses and runs a job document with the given `--tol` arguments.
pub fn run(document: &str, tol_args: &[String]) -> Result<Outcome, CliError> {
    let job = Job::parse(document)?;
    let overrides = job::parse_tol_overrides(tol_args)?;
    let tol = job.tolerances(&overrides)?;
    match job.command {
        job::Command::Certify => commands::certify(&job, tol),
        job::Command::Idempotents => commands::idempotents(&job, tol),
        job::Command::Counterexample => commands::counterexample(&job, tol),
        job::Command::Schur => commands::schur(&job, tol),
    }
}
