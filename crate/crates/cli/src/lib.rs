//! Command-line front end for `loopform`: an expression grammar, JSON
//! structure specs, and reports with exit codes 0 (all checks pass),
//! 1 (a check failed) and 2 (input, parse or mode error).

pub mod commands;
pub mod error;
pub mod golden;
pub mod parse;
pub mod report;
pub mod specfile;

pub use commands::{run, Outcome};
pub use error::CliError;
