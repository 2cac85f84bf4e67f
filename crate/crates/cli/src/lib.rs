//! Batch front end for `monres`: ideal files in, reports and JSON out.

pub mod commands;
pub mod json;
pub mod parse;

pub use commands::{run, CliError, Command, Options, Output, Status};
pub use parse::{parse_ideal_file, IdealFile, ParseError};
