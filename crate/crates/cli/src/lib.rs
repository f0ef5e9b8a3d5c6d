//! Library side of the `qkm` command-line tool: configuration, commands, checks and output.

pub mod checks;
mod commands;
mod config;
mod error;
mod output;

pub use commands::*;
pub use config::*;
pub use error::CliError;
pub use output::*;
