use crate::error::{bail, Result};
use crate::map::{Image, Map, Mask, ScalarMap};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsimConfig {
    /// Odd window side length.
    pub window: usize,
    pub c1: f64,
    pub c2: f64,
}

impl Default for SsimConfig {
    fn default() -> Self {
        Self { window: 3, c1: 0.01 * 0.01, c2: 0.03 * 0.03 }
    }
}

/// Per-pixel SSIM averaged over channels. Window statistics use only
/// in-image, unmasked neighbours (population variance). Masked pixels
/// read 1.
pub fn ssim(a: &Image, b: &Image, mask: Option<&Mask>, cfg: &SsimConfig) -> Result<ScalarMap> {
    if !a.same_shape(b) {
        bail!(ShapeMismatch, "SSIM inputs differ in shape");
    }
    if let Some(m) = mask {
        if m.dims() != a.dims() {
            bail!(ShapeMismatch, "SSIM mask differs in size");
        }
    }
    if cfg.window.is_multiple_of(2) {
        bail!(InvalidParameter, "SSIM window must be odd, got {}", cfg.window);
    }
    let (w, h) = a.dims();
    let half = (cfg.window / 2) as isize;
    let valid = |x: usize, y: usize| mask.is_none_or(|m| m.at(x, y));
    let channels = a.channels();
    Ok(Map::from_fn(w, h, |x, y| {
        if !valid(x, y) {
            return 1.0;
        }
        let mut idx = alloc::vec::Vec::with_capacity(cfg.window * cfg.window);
        for dy in -half..=half {
            for dx in -half..=half {
                let (nx, ny) = (x as isize + dx, y as isize + dy);
                if nx >= 0 && ny >= 0 && (nx as usize) < w && (ny as usize) < h && valid(nx as usize, ny as usize) {
                    idx.push((nx as usize, ny as usize));
                }
            }
        }
        let n = idx.len() as f64;
        let mut total = 0.0;
        for c in 0..channels {
            let (mut ma, mut mb) = (0.0, 0.0);
            for &(i, j) in &idx {
                ma += a.get(i, j, c);
                mb += b.get(i, j, c);
            }
            ma /= n;
            mb /= n;
            let (mut va, mut vb, mut cov) = (0.0, 0.0, 0.0);
            for &(i, j) in &idx {
                let (da, db) = (a.get(i, j, c) - ma, b.get(i, j, c) - mb);
                va += da * da;
                vb += db * db;
                cov += da * db;
            }
            va /= n;
            vb /= n;
            cov /= n;
            total +=
                ((2.0 * ma * mb + cfg.c1) * (2.0 * cov + cfg.c2)) / ((ma * ma + mb * mb + cfg.c1) * (va + vb + cfg.c2));
        }
        total / channels as f64
    }))
}
