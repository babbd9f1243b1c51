//! Library side of the `hcwres` command-line tool.

pub mod commands;
pub mod error;
pub mod input;

pub use commands::{run, Command, Format, Options, Output};
pub use error::{CliError, CliResult};
pub use input::{IdealFile, Input};
