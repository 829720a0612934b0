//! Command-line driver and game service for `chromatope`.

pub mod args;
pub mod commands;
pub mod error;
pub mod server;

pub use args::Cli;
pub use commands::{run, Outcome};
pub use error::CliError;
