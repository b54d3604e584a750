//! Command-line front end for `alf-core`: rod files, reports and polytope figures.

pub mod commands;
pub mod error;
pub mod format;
pub mod rodfile;
pub mod svg;

pub use error::{CliError, CliResult};
pub use rodfile::{parse_rod_file, serialize_rod, ROD_FORMAT};
