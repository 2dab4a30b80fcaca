//! Point clouds: whitespace-separated `x y z` text, or little-endian f32
//! triplets for files ending in `.bin`.

use std::path::Path;

use fpk_core::Vec3;

use super::{read_bytes, write_bytes};
use crate::error::{CliError, CliResult};

pub fn parse_text(text: &str) -> Result<Vec<Vec3>, String> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v = line
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| format!("line {}: bad number '{t}'", no + 1)))
            .collect::<Result<Vec<f64>, String>>()?;
        if v.len() < 3 {
            return Err(format!("line {}: expected x y z", no + 1));
        }
        out.push(Vec3::new(v[0], v[1], v[2]));
    }
    Ok(out)
}

pub fn parse_binary(bytes: &[u8]) -> Result<Vec<Vec3>, String> {
    if !bytes.len().is_multiple_of(12) {
        return Err(format!("{} bytes is not a whole number of f32 triplets", bytes.len()));
    }
    Ok(bytes
        .chunks_exact(12)
        .map(|c| {
            let f = |i: usize| f64::from(f32::from_le_bytes([c[i], c[i + 1], c[i + 2], c[i + 3]]));
            Vec3::new(f(0), f(4), f(8))
        })
        .collect())
}

fn is_binary(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("bin"))
}

pub fn read_cloud(path: &Path) -> CliResult<Vec<Vec3>> {
    let bytes = read_bytes(path)?;
    let parsed = if is_binary(path) {
        parse_binary(&bytes)
    } else {
        let text = String::from_utf8(bytes).map_err(|_| CliError::format(path, "point cloud text is not UTF-8"))?;
        parse_text(&text)
    };
    parsed.map_err(|m| CliError::format(path, m))
}

pub fn write_cloud(path: &Path, points: &[Vec3]) -> CliResult<()> {
    let bytes = if is_binary(path) {
        points.iter().flat_map(|p| [p.x, p.y, p.z]).flat_map(|v| (v as f32).to_le_bytes()).collect()
    } else {
        points.iter().map(|p| format!("{} {} {}\n", p.x, p.y, p.z)).collect::<String>().into_bytes()
    };
    write_bytes(path, &bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_binary() {
        let pts = parse_text("# lidar\n1 2 3\n\n 4.5 -1 0 99\n").unwrap();
        assert_eq!(pts, vec![Vec3::new(1.0, 2.0, 3.0), Vec3::new(4.5, -1.0, 0.0)]);
        assert!(parse_text("1 2\n").is_err());
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.bin");
        write_cloud(&p, &pts).unwrap();
        assert_eq!(read_cloud(&p).unwrap(), pts);
        assert!(parse_binary(&[0; 13]).is_err());
    }
}
