//! Rigid view synthesis between two frames of the same camera.

use alloc::vec::Vec;

use crate::camera::CameraModel;
use crate::error::{bail, Result};
use crate::geom::{Pose, Vec3};
use crate::map::{Image, LabelMap, Map, Mask, ScalarMap};
use crate::sampling::{bilinear, bilinear_scalar, inside, nearest, snap};

pub use crate::geom::scale_pose;

#[derive(Debug, Clone, PartialEq)]
pub struct WarpResult {
    pub image: Image,
    /// Ego mask: target pixels with a valid source sample.
    pub mask: Mask,
    /// Source pixel sampled by each target pixel; NaN where projection failed.
    pub coords: Map<[f64; 2]>,
}

fn check_dims(model: &CameraModel, what: &str, dims: (usize, usize)) -> Result<()> {
    let [w, h] = model.size();
    if dims != (w, h) {
        bail!(ShapeMismatch, "{what} is {}x{}, camera sensor is {w}x{h}", dims.0, dims.1);
    }
    Ok(())
}

/// Target pixel → 3D point at distance `d` → transformed point.
fn transformed_point(model: &CameraModel, pose: &Pose, x: usize, y: usize, d: f64) -> Option<Vec3> {
    if !(d > 0.0) || !d.is_finite() {
        return None;
    }
    let p = model.unproject([x as f64, y as f64], Some(d)).ok()?;
    Some(pose.apply(p))
}

/// Source coordinates for every target pixel plus the ego mask.
pub fn source_coordinates(distance: &ScalarMap, pose: &Pose, model: &CameraModel) -> Result<(Map<[f64; 2]>, Mask)> {
    check_dims(model, "distance map", distance.dims())?;
    let (w, h) = distance.dims();
    let mut mask = Map::filled(w, h, false);
    let coords = Map::from_fn(w, h, |x, y| {
        let Some(q) = transformed_point(model, pose, x, y, distance.at(x, y)) else {
            return [f64::NAN, f64::NAN];
        };
        match model.project(q) {
            Ok([u, v]) => {
                let (u, v) = (snap(u), snap(v));
                mask.set(x, y, inside(u, v, w, h));
                [u, v]
            }
            Err(_) => [f64::NAN, f64::NAN],
        }
    });
    Ok((coords, mask))
}

/// Backward warp of `source` into the target view; invalid pixels are 0.
pub fn warp_image(source: &Image, distance: &ScalarMap, pose: &Pose, model: &CameraModel) -> Result<WarpResult> {
    check_dims(model, "source image", source.dims())?;
    let (coords, mask) = source_coordinates(distance, pose, model)?;
    let (w, h) = source.dims();
    let mut image = Image::filled(w, h, source.channels(), 0.0);
    for y in 0..h {
        for x in 0..w {
            if !mask.at(x, y) {
                continue;
            }
            let [u, v] = coords.at(x, y);
            for (c, o) in image.pixel_mut(x, y).iter_mut().enumerate() {
                *o = bilinear(source, c, u, v);
            }
        }
    }
    Ok(WarpResult { image, mask, coords })
}

/// Nearest-neighbour warp of a label map; invalid pixels keep label 0.
pub fn warp_labels(
    source: &LabelMap,
    distance: &ScalarMap,
    pose: &Pose,
    model: &CameraModel,
) -> Result<(LabelMap, Mask)> {
    check_dims(model, "label map", source.dims())?;
    let (coords, mask) = source_coordinates(distance, pose, model)?;
    let labels = Map::from_fn(source.width(), source.height(), |x, y| {
        if mask.at(x, y) {
            let [u, v] = coords.at(x, y);
            nearest(source, u, v)
        } else {
            0
        }
    });
    Ok((labels, mask))
}

/// `ω = [min_k pe(I_t, Î_k) < min_k pe(I_t, I_k)]` per pixel.
pub fn auto_mask(
    target: &Image,
    reconstructions: &[Image],
    sources: &[Image],
    pe: impl Fn(&Image, &Image) -> Result<ScalarMap>,
) -> Result<Mask> {
    if reconstructions.is_empty() || sources.is_empty() {
        bail!(Empty, "auto-mask needs at least one reconstruction and one source");
    }
    let min_over = |imgs: &[Image]| -> Result<ScalarMap> {
        let mut best: Option<ScalarMap> = None;
        for img in imgs {
            let e = pe(target, img)?;
            best = Some(match best {
                None => e,
                Some(b) => {
                    if !b.same_dims(&e) {
                        bail!(ShapeMismatch, "error maps differ in size");
                    }
                    Map::from_fn(b.width(), b.height(), |x, y| b.at(x, y).min(e.at(x, y)))
                }
            });
        }
        Ok(best.expect("non-empty"))
    };
    let rec = min_over(reconstructions)?;
    let src = min_over(sources)?;
    if !rec.same_dims(&src) {
        bail!(ShapeMismatch, "error maps differ in size");
    }
    Ok(Map::from_fn(rec.width(), rec.height(), |x, y| rec.at(x, y) < src.at(x, y)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateDecision {
    /// Fraction of dynamic-class pixels whose class differs between the maps.
    pub inconsistency: f64,
    /// Whether the frame was judged moving and the mask applied.
    pub applied: bool,
}

/// `μ = 0` where either map holds a dynamic class, applied only when at
/// least `epsilon` of the dynamic-class pixels disagree between the maps.
pub fn dynamic_object_mask(
    current: &LabelMap,
    warped: &LabelMap,
    dynamic_classes: &[u32],
    epsilon: f64,
) -> Result<(Mask, GateDecision)> {
    if !current.same_dims(warped) {
        bail!(ShapeMismatch, "label maps differ in size");
    }
    let is_dyn = |c: u32| dynamic_classes.contains(&c);
    let (mut dynamic, mut inconsistent) = (0usize, 0usize);
    for (&a, &b) in current.data().iter().zip(warped.data()) {
        if is_dyn(a) || is_dyn(b) {
            dynamic += 1;
            if a != b {
                inconsistent += 1;
            }
        }
    }
    let inconsistency = if dynamic == 0 { 0.0 } else { inconsistent as f64 / dynamic as f64 };
    let applied = dynamic > 0 && inconsistency >= epsilon;
    let (w, h) = current.dims();
    let mask = if applied {
        Map::from_fn(w, h, |x, y| !(is_dyn(current.at(x, y)) || is_dyn(warped.at(x, y))))
    } else {
        Map::filled(w, h, true)
    };
    Ok((mask, GateDecision { inconsistency, applied }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceWarp {
    /// `D_{t'}` sampled at the projected coordinates.
    pub interpolated: ScalarMap,
    /// Norm of the transformed point.
    pub transformed: ScalarMap,
    pub mask: Mask,
}

pub fn warp_distance(d_t: &ScalarMap, d_t1: &ScalarMap, pose: &Pose, model: &CameraModel) -> Result<DistanceWarp> {
    check_dims(model, "distance map", d_t.dims())?;
    check_dims(model, "distance map", d_t1.dims())?;
    let (w, h) = d_t.dims();
    let mut mask = Map::filled(w, h, false);
    let mut interpolated = Map::filled(w, h, 0.0);
    let mut transformed = Map::filled(w, h, 0.0);
    for y in 0..h {
        for x in 0..w {
            let Some(q) = transformed_point(model, pose, x, y, d_t.at(x, y)) else { continue };
            let Ok([u, v]) = model.project(q) else { continue };
            let (u, v) = (snap(u), snap(v));
            if !inside(u, v, w, h) {
                continue;
            }
            mask.set(x, y, true);
            interpolated.set(x, y, bilinear_scalar(d_t1, u, v));
            transformed.set(x, y, q.norm());
        }
    }
    Ok(DistanceWarp { interpolated, transformed, mask })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceMode {
    /// `D = m σ + n`
    Fisheye,
    /// `D = 1 / (m σ + n)`
    Pinhole,
}

pub const MIN_DISTANCE: f64 = 0.1;
pub const MAX_DISTANCE: f64 = 100.0;

pub fn sigmoid_to_distance_value(sigma: f64, mode: DistanceMode) -> f64 {
    match mode {
        DistanceMode::Fisheye => (MAX_DISTANCE - MIN_DISTANCE) * sigma + MIN_DISTANCE,
        DistanceMode::Pinhole => {
            let n = 1.0 / MAX_DISTANCE;
            let m = 1.0 / MIN_DISTANCE - n;
            1.0 / (m * sigma + n)
        }
    }
}

pub fn sigmoid_to_distance(sigma: &ScalarMap, mode: DistanceMode) -> ScalarMap {
    sigma.map(|&s| sigmoid_to_distance_value(s.clamp(0.0, 1.0), mode))
}

/// Pixels whose warped coordinates are valid in every listed map.
pub fn intersect_masks(masks: &[Mask]) -> Option<Mask> {
    let first = masks.first()?;
    let data: Vec<bool> = (0..first.len()).map(|i| masks.iter().all(|m| m.data()[i])).collect();
    Map::from_vec(first.width(), first.height(), data).ok()
}
