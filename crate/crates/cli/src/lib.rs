//! File formats and subcommand implementations behind the `fpk` binary.

pub mod calib;
pub mod commands;
pub mod error;
pub mod formats;

pub use calib::CalibrationFile;
pub use error::{CliError, CliResult};
