//! Command-line front end: scheme files, commands and reports.

pub mod commands;
pub mod error;
pub mod report;
pub mod schemefile;

pub use commands::{run, Command, Outcome, RunConfig};
pub use error::{CliError, CliResult};
pub use report::Format;
