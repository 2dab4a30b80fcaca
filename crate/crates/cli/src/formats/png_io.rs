//! 8-bit PNG: images scaled to [0, 1], masks as 0/255, labels as gray
//! values.

use std::io::Cursor;
use std::path::Path;

use fpk_core::{Image, LabelMap, Mask};

use super::{read_bytes, write_bytes};
use crate::error::{CliError, CliResult};

struct Decoded {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<u8>,
}

fn decode(path: &Path) -> CliResult<Decoded> {
    let bytes = read_bytes(path)?;
    let mut dec = png::Decoder::new(Cursor::new(bytes));
    dec.set_transformations(png::Transformations::normalize_to_color8());
    let fail = |e: png::DecodingError| CliError::format(path, e.to_string());
    let mut reader = dec.read_info().map_err(fail)?;
    let size = reader.output_buffer_size().ok_or_else(|| CliError::format(path, "image too large"))?;
    let mut buf = vec![0; size];
    let info = reader.next_frame(&mut buf).map_err(fail)?;
    buf.truncate(info.buffer_size());
    let channels = info.color_type.samples();
    Ok(Decoded { width: info.width as usize, height: info.height as usize, channels, data: buf })
}

fn encode(path: &Path, width: usize, height: usize, color: png::ColorType, data: &[u8]) -> CliResult<()> {
    let mut out = Vec::new();
    {
        let fail = |e: png::EncodingError| CliError::format(path, e.to_string());
        let mut enc = png::Encoder::new(&mut out, width as u32, height as u32);
        enc.set_color(color);
        enc.set_depth(png::BitDepth::Eight);
        let mut w = enc.write_header().map_err(fail)?;
        w.write_image_data(data).map_err(fail)?;
    }
    write_bytes(path, &out)
}

/// Gray or RGB image in [0, 1]; alpha is dropped.
pub fn read_image(path: &Path) -> CliResult<Image> {
    let d = decode(path)?;
    let keep = if d.channels >= 3 { 3 } else { 1 };
    let data =
        d.data.chunks_exact(d.channels).flat_map(|px| px[..keep].iter().map(|&v| f64::from(v) / 255.0)).collect();
    Ok(Image::from_vec(d.width, d.height, keep, data)?)
}

pub fn write_image(path: &Path, img: &Image) -> CliResult<()> {
    let color = match img.channels() {
        1 => png::ColorType::Grayscale,
        3 => png::ColorType::Rgb,
        c => return Err(CliError::Invalid(format!("PNG output needs 1 or 3 channels, image has {c}"))),
    };
    let data: Vec<u8> = img.data().iter().map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8).collect();
    encode(path, img.width(), img.height(), color, &data)
}

/// First channel; any non-zero value is foreground.
pub fn read_mask(path: &Path) -> CliResult<Mask> {
    let d = decode(path)?;
    let data = d.data.chunks_exact(d.channels).map(|px| px[0] != 0).collect();
    Ok(Mask::from_vec(d.width, d.height, data)?)
}

pub fn write_mask(path: &Path, mask: &Mask) -> CliResult<()> {
    let data: Vec<u8> = mask.data().iter().map(|&m| if m { 255 } else { 0 }).collect();
    encode(path, mask.width(), mask.height(), png::ColorType::Grayscale, &data)
}

/// First channel as class ids.
pub fn read_labels(path: &Path) -> CliResult<LabelMap> {
    let d = decode(path)?;
    let data = d.data.chunks_exact(d.channels).map(|px| u32::from(px[0])).collect();
    Ok(LabelMap::from_vec(d.width, d.height, data)?)
}

pub fn write_labels(path: &Path, labels: &LabelMap) -> CliResult<()> {
    let data = labels
        .data()
        .iter()
        .map(|&l| u8::try_from(l).map_err(|_| CliError::Invalid(format!("label {l} does not fit in 8 bits"))))
        .collect::<CliResult<Vec<u8>>>()?;
    encode(path, labels.width(), labels.height(), png::ColorType::Grayscale, &data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fpk_core::Map;

    #[test]
    fn masks_labels_images_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let m = Map::from_fn(5, 3, |x, y| (x + y) % 2 == 0);
        let p = dir.path().join("m.png");
        write_mask(&p, &m).unwrap();
        assert_eq!(read_mask(&p).unwrap(), m);
        let l = Map::from_fn(4, 4, |x, y| (x * 4 + y) as u32);
        let p = dir.path().join("l.png");
        write_labels(&p, &l).unwrap();
        assert_eq!(read_labels(&p).unwrap(), l);
        let img = Image::from_fn(3, 2, 3, |x, y, c| ((x + y + c) * 51) as f64 / 255.0);
        let p = dir.path().join("i.png");
        write_image(&p, &img).unwrap();
        assert_eq!(read_image(&p).unwrap(), img);
        assert!(write_labels(&p, &Map::filled(1, 1, 300)).is_err());
    }
}
