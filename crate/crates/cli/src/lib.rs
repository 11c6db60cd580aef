//! Command-line orchestration for `qinfo-core`: build states, partitions and
//! functionals from text or JSON, run extractions, dilations and axiom
//! suites, and print reports as JSON or CSV.

pub mod commands;
pub mod error;
pub mod oracle;
pub mod report;
pub mod spec;

pub use commands::{run, Cli, Command};
pub use error::CliError;
