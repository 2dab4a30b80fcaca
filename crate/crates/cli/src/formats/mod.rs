//! On-disk formats: PFM float maps, 8-bit PNG images, masks and labels,
//! point clouds, loss histories and JSON-lines records.

pub mod cloud;
pub mod history;
pub mod pfm;
pub mod png_io;
pub mod records;

use std::path::Path;

use crate::error::{CliError, CliResult};

pub(crate) fn write_bytes(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub(crate) fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::io(path, e))
}
