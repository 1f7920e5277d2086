//! Configuration, file formats and subcommand implementations behind the
//! `radhj` binary.

pub mod config;
pub mod error;
pub mod io;
pub mod simulate;
pub mod sweep;
pub mod verify;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
