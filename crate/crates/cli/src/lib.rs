//! File formats, the command implementations and the parallel roof driver
//! behind the `icem` binary.

pub mod args;
pub mod commands;
pub mod error;
pub mod format;
pub mod parallel;
pub mod statefile;

pub use error::{CliError, CliResult};
