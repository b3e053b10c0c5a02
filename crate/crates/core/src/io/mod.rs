//! Run configuration, table emitters and the bodies of the CLI commands.

pub mod commands;
pub mod config;
pub mod emit;

use thiserror::Error;

pub use commands::*;
pub use config::{ConfigError, RunConfig};
pub use emit::{read_rows, rows_to_string, sig12, write_rows, EmitError, Format};

use crate::error::ModelError;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Emit(#[from] EmitError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}
