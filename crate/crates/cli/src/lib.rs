//! Command-line driver: loads algebra and pair files, runs constructions and checks, and
//! reports the outcome as text or JSON.

pub mod commands;
pub mod format;
pub mod report;

use jb_core::error::CoreError;
use thiserror::Error;

pub use commands::{run, Cli, Command};
pub use report::{Check, RunReport, Status};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}
