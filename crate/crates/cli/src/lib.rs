//! The `eqbundle` command-line tool: documents, operands, and commands.

pub mod commands;
pub mod document;
pub mod error;
pub mod fuzz;
pub mod inputs;

pub use commands::{run, Cli, Outcome};
pub use document::{Document, Report};
pub use error::CliError;
