//! Library side of the `ansec` command: recipe parsing, sweeps, validation
//! reports and eigenvalue tables.

pub mod config;
pub mod error;
pub mod pdf_dump;
pub mod sweep;
pub mod validate;

pub use error::{CliError, CliResult};
