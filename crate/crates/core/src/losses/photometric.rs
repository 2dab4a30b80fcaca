use alloc::vec::Vec;

use super::robust::{robust_loss, RobustLossParams};
use super::ssim::{ssim, SsimConfig};
use crate::error::{bail, Result};
use crate::map::{Image, Map, Mask, ScalarMap};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotometricConfig {
    pub alpha: f64,
    /// Values above this percentile of the minimised map are zeroed.
    pub clip_percentile: f64,
    pub ssim: SsimConfig,
}

impl Default for PhotometricConfig {
    fn default() -> Self {
        Self { alpha: 0.85, clip_percentile: 95.0, ssim: SsimConfig::default() }
    }
}

impl PhotometricConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            bail!(InvalidParameter, "alpha must lie in [0, 1], got {}", self.alpha);
        }
        if !(self.clip_percentile > 0.0 && self.clip_percentile <= 100.0) {
            bail!(InvalidParameter, "clip percentile must lie in (0, 100], got {}", self.clip_percentile);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhotometricLoss {
    /// Per-pixel minimum after clipping; zero where `valid` is false.
    pub map: ScalarMap,
    pub valid: Mask,
    pub value: f64,
}

/// Per-pixel `α(1−SSIM)/2 + (1−α)·robust(|Δ|)`, the robust term averaged
/// over channels.
pub fn photometric_error(
    target: &Image,
    recon: &Image,
    mask: Option<&Mask>,
    cfg: &PhotometricConfig,
    robust: RobustLossParams,
) -> Result<ScalarMap> {
    cfg.validate()?;
    let s = ssim(target, recon, mask, &cfg.ssim)?;
    let channels = target.channels() as f64;
    Ok(Map::from_fn(target.width(), target.height(), |x, y| {
        let rob: f64 = target
            .pixel(x, y)
            .iter()
            .zip(recon.pixel(x, y))
            .map(|(a, b)| robust_loss((a - b).abs(), robust))
            .sum::<f64>()
            / channels;
        cfg.alpha * (1.0 - s.at(x, y)) / 2.0 + (1.0 - cfg.alpha) * rob
    }))
}

/// Minimum over reconstructions, clipped at the configured percentile.
/// `masks` is either empty or one mask per reconstruction; a pixel masked in
/// every reconstruction is invalid.
pub fn photometric_loss(
    target: &Image,
    recons: &[Image],
    masks: &[Mask],
    cfg: &PhotometricConfig,
    robust: RobustLossParams,
) -> Result<PhotometricLoss> {
    if recons.is_empty() {
        bail!(Empty, "photometric loss needs at least one reconstruction");
    }
    if !masks.is_empty() && masks.len() != recons.len() {
        bail!(ShapeMismatch, "{} masks for {} reconstructions", masks.len(), recons.len());
    }
    let (w, h) = target.dims();
    let mut best = Map::filled(w, h, f64::INFINITY);
    for (i, r) in recons.iter().enumerate() {
        let m = masks.get(i);
        let e = photometric_error(target, r, m, cfg, robust)?;
        for y in 0..h {
            for x in 0..w {
                if m.is_none_or(|m| m.at(x, y)) && e.at(x, y) < best.at(x, y) {
                    best.set(x, y, e.at(x, y));
                }
            }
        }
    }
    let valid = best.map(|v| v.is_finite());
    let values: Vec<f64> = best.data().iter().copied().filter(|v| v.is_finite()).collect();
    if values.is_empty() {
        return Ok(PhotometricLoss { map: Map::filled(w, h, 0.0), valid, value: 0.0 });
    }
    let threshold = percentile(&values, cfg.clip_percentile)?;
    let map = best.map(|&v| if !v.is_finite() || v > threshold { 0.0 } else { v });
    let value =
        map.data().iter().zip(valid.data()).filter(|(_, &ok)| ok).map(|(v, _)| v).sum::<f64>() / values.len() as f64;
    Ok(PhotometricLoss { map, valid, value })
}

/// Linear-interpolated percentile, `p` in [0, 100].
pub fn percentile(values: &[f64], p: f64) -> Result<f64> {
    if values.is_empty() {
        bail!(Empty, "percentile of an empty set");
    }
    if !(0.0..=100.0).contains(&p) {
        bail!(InvalidParameter, "percentile must lie in [0, 100], got {p}");
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = p / 100.0 * (v.len() - 1) as f64;
    let lo = rank as usize;
    let hi = (lo + 1).min(v.len() - 1);
    let t = rank - lo as f64;
    Ok(v[lo] + (v[hi] - v[lo]) * t)
}
