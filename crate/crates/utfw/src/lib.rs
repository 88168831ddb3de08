//! File formats, reports and the command-line front end for `utfw-core`.

pub mod cli;
pub mod error;
pub mod io;
pub mod report;
pub mod table;

pub use error::{exit, CliError, InputError};
pub use report::{Provenance, RunReport};
