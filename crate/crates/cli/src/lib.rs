//! Command-line front end: configuration, experiment dispatch and CSV output.

pub mod commands;
pub mod config;
pub mod csv;

use thiserror::Error;

pub use commands::{cmd_analyze, cmd_compare, cmd_simulate, cmd_sweep, Report};
pub use config::RunConfig;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("numerical divergence: {0}")]
    Divergence(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Validation(_) => 2,
            CliError::Divergence(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}
