//! LiDAR projection into the camera and distance-sliced occlusion removal.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::camera::CameraModel;
use crate::error::{bail, Result};
use crate::geom::{Pose, Vec3};
use crate::map::{Map, ScalarMap};

/// Sparse distance image in metres; 0 marks pixels without a sample.
pub type DepthImage = ScalarMap;

#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<Vec3>,
    /// LiDAR frame to camera frame.
    extrinsic: Pose,
}

impl PointCloud {
    pub fn new(points: Vec<Vec3>, extrinsic: Pose) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            bail!(InvalidParameter, "point cloud contains a non-finite point {p:?}");
        }
        Ok(Self { points, extrinsic })
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn extrinsic(&self) -> &Pose {
        &self.extrinsic
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub depth: DepthImage,
    /// Points outside the model domain or the sensor, or at the origin.
    pub dropped: usize,
}

/// Writes each point's camera-frame distance at its nearest pixel; the
/// closest point wins when several land on one pixel.
pub fn project_cloud(pc: &PointCloud, model: &CameraModel) -> Projection {
    let [w, h] = model.size();
    let mut depth = Map::filled(w, h, 0.0);
    let mut dropped = 0;
    for &p in pc.points() {
        let q = pc.extrinsic().apply(p);
        let d = q.norm();
        let Ok([u, v]) = model.project(q) else {
            dropped += 1;
            continue;
        };
        let (x, y) = ((u + 0.5).floor(), (v + 0.5).floor());
        if !(d > 0.0) || x < 0.0 || y < 0.0 || x >= w as f64 || y >= h as f64 {
            dropped += 1;
            continue;
        }
        let cell = depth.get_mut(x as usize, y as usize);
        if *cell == 0.0 || d < *cell {
            *cell = d;
        }
    }
    Projection { depth, dropped }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OcclusionConfig {
    pub slices: usize,
    /// Odd side length of the square dilation kernel.
    pub kernel: usize,
}

impl Default for OcclusionConfig {
    fn default() -> Self {
        Self { slices: 8, kernel: 7 }
    }
}

/// Lower distance bounds of slices `1..slices`, at equal-count ranks of the
/// sorted samples. Equal distances always share a slice.
pub fn slice_boundaries(d: &DepthImage, slices: usize) -> Result<Vec<f64>> {
    if slices == 0 {
        bail!(InvalidParameter, "occlusion correction needs at least one slice");
    }
    let mut v: Vec<f64> = d.data().iter().copied().filter(|&x| x > 0.0).collect();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let mut b: Vec<f64> = (1..slices).filter_map(|k| v.get(k * n / slices).copied()).collect();
    b.dedup();
    Ok(b)
}

/// Removes samples that have a sample from a strictly nearer slice inside
/// the kernel window around them.
pub fn occlusion_correct_with_boundaries(d: &DepthImage, boundaries: &[f64], kernel: usize) -> Result<DepthImage> {
    if kernel.is_multiple_of(2) {
        bail!(InvalidParameter, "dilation kernel must be odd, got {kernel}");
    }
    if boundaries.windows(2).any(|w| w[0] >= w[1]) {
        bail!(InvalidParameter, "slice boundaries must be strictly increasing");
    }
    let (w, h) = d.dims();
    let slice_of = |x: f64| boundaries.partition_point(|&b| b <= x);
    let mut by_slice: Vec<Vec<(usize, usize)>> = alloc::vec![Vec::new(); boundaries.len() + 1];
    for y in 0..h {
        for x in 0..w {
            let v = d.at(x, y);
            if v > 0.0 {
                by_slice[slice_of(v)].push((x, y));
            }
        }
    }
    let r = kernel / 2;
    let mut covered = Map::filled(w, h, false);
    let mut out = d.clone();
    for pts in &by_slice {
        for &(x, y) in pts {
            if covered.at(x, y) {
                out.set(x, y, 0.0);
            }
        }
        for &(x, y) in pts {
            for yy in y.saturating_sub(r)..=(y + r).min(h - 1) {
                for xx in x.saturating_sub(r)..=(x + r).min(w - 1) {
                    covered.set(xx, yy, true);
                }
            }
        }
    }
    Ok(out)
}

/// Occlusion removal with equal-count distance slices.
pub fn occlusion_correct(d: &DepthImage, cfg: &OcclusionConfig) -> Result<DepthImage> {
    let b = slice_boundaries(d, cfg.slices)?;
    occlusion_correct_with_boundaries(d, &b, cfg.kernel)
}
