//! Portable float maps: `Pf` (one channel) or `PF` (three), rows stored
//! bottom-up, little-endian when the scale is negative.

use std::path::Path;

use fpk_core::{Image, ScalarMap};

use super::{read_bytes, write_bytes};
use crate::error::{CliError, CliResult};

pub fn encode(width: usize, height: usize, channels: usize, data: &[f64]) -> Vec<u8> {
    let tag = if channels == 1 { "Pf" } else { "PF" };
    let mut out = format!("{tag}\n{width} {height}\n-1.0\n").into_bytes();
    out.reserve(width * height * channels * 4);
    let row = width * channels;
    for y in (0..height).rev() {
        for v in &data[y * row..(y + 1) * row] {
            out.extend_from_slice(&(*v as f32).to_le_bytes());
        }
    }
    out
}

/// Returns `(width, height, channels, data)` with rows top-down.
pub fn decode(bytes: &[u8]) -> Result<(usize, usize, usize, Vec<f64>), String> {
    let mut fields = Vec::with_capacity(4);
    let mut pos = 0;
    while fields.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err("truncated header".into());
        }
        fields.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| "header is not ASCII")?);
    }
    pos += 1;
    let channels = match fields[0] {
        "Pf" => 1,
        "PF" => 3,
        other => return Err(format!("unknown PFM tag '{other}'")),
    };
    let parse = |s: &str| s.parse::<usize>().map_err(|_| format!("bad dimension '{s}'"));
    let (w, h) = (parse(fields[1])?, parse(fields[2])?);
    let scale: f64 = fields[3].parse().map_err(|_| format!("bad scale '{}'", fields[3]))?;
    let little = scale < 0.0;
    let n = w * h * channels;
    let body = bytes.get(pos..pos + 4 * n).ok_or("truncated pixel data")?;
    let mut data = vec![0.0; n];
    let row = w * channels;
    for (i, chunk) in body.chunks_exact(4).enumerate() {
        let raw = [chunk[0], chunk[1], chunk[2], chunk[3]];
        let v = if little { f32::from_le_bytes(raw) } else { f32::from_be_bytes(raw) };
        let (file_row, col) = (i / row, i % row);
        data[(h - 1 - file_row) * row + col] = f64::from(v);
    }
    Ok((w, h, channels, data))
}

pub fn write_map(path: &Path, map: &ScalarMap) -> CliResult<()> {
    write_bytes(path, &encode(map.width(), map.height(), 1, map.data()))
}

pub fn write_image(path: &Path, img: &Image) -> CliResult<()> {
    if img.channels() != 1 && img.channels() != 3 {
        return Err(CliError::Invalid(format!("PFM holds 1 or 3 channels, image has {}", img.channels())));
    }
    write_bytes(path, &encode(img.width(), img.height(), img.channels(), img.data()))
}

pub fn read_map(path: &Path) -> CliResult<ScalarMap> {
    let (w, h, c, data) = decode(&read_bytes(path)?).map_err(|m| CliError::format(path, m))?;
    if c != 1 {
        return Err(CliError::format(path, "expected a single-channel Pf map"));
    }
    Ok(ScalarMap::from_vec(w, h, data)?)
}
