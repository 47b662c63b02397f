//! Command-line driver: reads a JSON scenario, runs one computation from
//! `maslov-core` and writes plot-ready CSV or a JSON report.

pub mod commands;
pub mod error;
pub mod report;
pub mod scenario;

pub use commands::{run, Cli, Command, Flags, RunOutput};
pub use error::{CliError, CliResult};
