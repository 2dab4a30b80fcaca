use crate::camera::CameraModel;
use crate::error::{bail, Result};
use crate::geom::Pose;
use crate::map::{Mask, ScalarMap};
use crate::synthesis::warp_distance;

/// Sum over ordered frame pairs of the mean `|D̂_{t→t'} − D_{t→t'}|`.
/// `poses[t]` maps frame-`t` camera coordinates to a common world frame;
/// `masks`, when given, holds one ego mask per frame.
pub fn csdc_loss(frames: &[ScalarMap], poses: &[Pose], model: &CameraModel, masks: Option<&[Mask]>) -> Result<f64> {
    if frames.len() < 2 {
        bail!(InvalidParameter, "distance consistency needs at least two frames, got {}", frames.len());
    }
    if poses.len() != frames.len() {
        bail!(ShapeMismatch, "{} poses for {} frames", poses.len(), frames.len());
    }
    if let Some(m) = masks {
        if m.len() != frames.len() || m.iter().any(|m| m.dims() != frames[0].dims()) {
            bail!(ShapeMismatch, "ego masks must match the frames");
        }
    }
    let mut total = 0.0;
    for t in 0..frames.len() {
        for u in 0..frames.len() {
            if t == u {
                continue;
            }
            let rel = poses[u].inverse().compose(&poses[t]);
            let dw = warp_distance(&frames[t], &frames[u], &rel, model)?;
            let (w, h) = frames[t].dims();
            let mut sum = 0.0;
            let mut n = 0usize;
            for y in 0..h {
                for x in 0..w {
                    if dw.mask.at(x, y) && masks.is_none_or(|m| m[t].at(x, y)) {
                        sum += (dw.interpolated.at(x, y) - dw.transformed.at(x, y)).abs();
                        n += 1;
                    }
                }
            }
            if n > 0 {
                total += sum / n as f64;
            }
        }
    }
    Ok(total)
}
