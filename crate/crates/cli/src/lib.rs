//! Command-line front end: configuration, the point cache and the
//! subcommands over the `heegner1` library.

pub mod cache;
pub mod commands;
pub mod config;
pub mod error;

pub use cache::PointCache;
pub use commands::{exit_code, render, run, Cli, Command, Envelope};
pub use config::{load_config, ConfigFlags, OutputFormat, RunConfig};
pub use error::CliError;

/// Exit code for usage errors.
pub const USAGE_EXIT: i32 = 3;
