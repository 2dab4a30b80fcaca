use alloc::vec::Vec;
use core::f64::consts::TAU;
#[allow(unused_imports)]
use num_traits::Float;

use super::contour::{cross, dist, segment_distance, Contour, Point};
use crate::error::{bail, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolygonMode {
    UniformAngular,
    UniformPerimeter,
    Adaptive,
}

impl PolygonMode {
    pub fn name(self) -> &'static str {
        match self {
            Self::UniformAngular => "angular",
            Self::UniformPerimeter => "perimeter",
            Self::Adaptive => "adaptive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PolygonRep {
    /// Radii at `N` equal angle steps from the x axis around `center`.
    Angular { center: Point, radii: Vec<f64>, star_violation: bool },
    /// Vertices as offsets from the contour centroid.
    Vertices { mode: PolygonMode, centroid: Point, offsets: Vec<Point> },
}

impl PolygonRep {
    pub fn mode(&self) -> PolygonMode {
        match self {
            Self::Angular { .. } => PolygonMode::UniformAngular,
            Self::Vertices { mode, .. } => *mode,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Angular { radii, .. } => radii.len(),
            Self::Vertices { offsets, .. } => offsets.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Absolute polygon vertices.
    pub fn vertices(&self) -> Vec<Point> {
        match self {
            Self::Angular { center, radii, .. } => {
                let n = radii.len() as f64;
                radii
                    .iter()
                    .enumerate()
                    .map(|(k, r)| {
                        let (s, c) = (TAU * k as f64 / n).sin_cos();
                        [center[0] + r * c, center[1] + r * s]
                    })
                    .collect()
            }
            Self::Vertices { centroid, offsets, .. } => {
                offsets.iter().map(|o| [centroid[0] + o[0], centroid[1] + o[1]]).collect()
            }
        }
    }
}

pub fn sample_polygon(c: &Contour, mode: PolygonMode, n: usize) -> Result<PolygonRep> {
    if n < 3 {
        bail!(InvalidParameter, "polygon needs at least 3 vertices, got {n}");
    }
    let centroid = c.centroid();
    let relative = |pts: Vec<Point>| pts.into_iter().map(|p| [p[0] - centroid[0], p[1] - centroid[1]]).collect();
    Ok(match mode {
        PolygonMode::UniformAngular => angular(c, centroid, n),
        PolygonMode::UniformPerimeter => {
            PolygonRep::Vertices { mode, centroid, offsets: relative(resample_arclength(c, n)) }
        }
        PolygonMode::Adaptive => PolygonRep::Vertices { mode, centroid, offsets: relative(adaptive(c, n)) },
    })
}

/// Farthest ray/contour intersection per direction. More than one crossing
/// means the contour is not star-shaped about `center`.
fn angular(c: &Contour, center: Point, n: usize) -> PolygonRep {
    let mut star_violation = false;
    let radii = (0..n)
        .map(|k| {
            let (s, co) = (TAU * k as f64 / n as f64).sin_cos();
            let dir = [co, s];
            let mut hits: Vec<f64> = c.edges().filter_map(|(a, b)| ray_segment(center, dir, a, b)).collect();
            hits.sort_by(f64::total_cmp);
            hits.dedup_by(|x, y| (*x - *y).abs() < 1e-9);
            if hits.len() > 1 {
                star_violation = true;
            }
            hits.last().copied().unwrap_or(0.0)
        })
        .collect();
    PolygonRep::Angular { center, radii, star_violation }
}

fn ray_segment(o: Point, d: Point, a: Point, b: Point) -> Option<f64> {
    let e = [b[0] - a[0], b[1] - a[1]];
    let den = d[0] * e[1] - d[1] * e[0];
    if den.abs() < 1e-15 {
        return None;
    }
    let w = [a[0] - o[0], a[1] - o[1]];
    let t = (w[0] * e[1] - w[1] * e[0]) / den;
    let u = (w[0] * d[1] - w[1] * d[0]) / den;
    (t >= 0.0 && (-1e-12..=1.0 + 1e-12).contains(&u)).then_some(t)
}

/// `n` points at equal arclength along the contour, starting at vertex 0.
pub fn resample_arclength(c: &Contour, n: usize) -> Vec<Point> {
    let v = c.vertices();
    let total = c.perimeter();
    let mut out = Vec::with_capacity(n);
    let (mut edge, mut acc) = (0usize, 0.0);
    for k in 0..n {
        let target = total * k as f64 / n as f64;
        loop {
            let (a, b) = (v[edge % v.len()], v[(edge + 1) % v.len()]);
            let len = dist(a, b);
            if acc + len >= target || edge + 1 >= v.len() {
                let t = if len > 0.0 { ((target - acc) / len).clamp(0.0, 1.0) } else { 0.0 };
                out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
                break;
            }
            acc += len;
            edge += 1;
        }
    }
    out
}

const K_COSINE: usize = 7;
const DOMINANT_MIN_COS: f64 = -0.95;
const MAX_DENSE_SAMPLES: usize = 4096;

/// k-cosine dominant points, then farthest-point insertion (or selection
/// among the dominant points) to exactly `n` vertices.
fn adaptive(c: &Contour, n: usize) -> Vec<Point> {
    let m = (c.perimeter().ceil() as usize).clamp(8 * n, MAX_DENSE_SAMPLES.max(8 * n));
    let dense = resample_arclength(c, m);
    let k = K_COSINE.min(m / 4).max(1);
    let cosine: Vec<f64> = (0..m)
        .map(|i| {
            let p = dense[i];
            let a = dense[(i + m - k) % m];
            let b = dense[(i + k) % m];
            let (va, vb) = ([a[0] - p[0], a[1] - p[1]], [b[0] - p[0], b[1] - p[1]]);
            let den = dist(a, p) * dist(b, p);
            if den > 0.0 {
                (va[0] * vb[0] + va[1] * vb[1]) / den
            } else {
                -1.0
            }
        })
        .collect();
    let dominant: Vec<usize> = (0..m)
        .filter(|&i| {
            cosine[i] > DOMINANT_MIN_COS
                && (1..=k).all(|j| cosine[i] >= cosine[(i + j) % m] && cosine[i] > cosine[(i + m - j) % m])
        })
        .collect();
    let mut chosen: Vec<usize> = if dominant.len() > n { farthest_pair(&dense, &dominant) } else { dominant.clone() };
    if chosen.len() < 2 {
        let seed = chosen.first().copied().unwrap_or(0);
        let far =
            (0..m).max_by(|&a, &b| dist(dense[seed], dense[a]).total_cmp(&dist(dense[seed], dense[b]))).unwrap_or(0);
        chosen = alloc::vec![seed, far];
        chosen.sort_unstable();
        chosen.dedup();
    }
    let pool: Vec<usize> = if dominant.len() > n { dominant } else { (0..m).collect() };
    while chosen.len() < n {
        let mut best: Option<(f64, usize)> = None;
        for &i in &pool {
            if chosen.binary_search(&i).is_ok() {
                continue;
            }
            let pos = chosen.partition_point(|&j| j < i);
            let a = chosen[(pos + chosen.len() - 1) % chosen.len()];
            let b = chosen[pos % chosen.len()];
            let d = segment_distance(dense[i], dense[a], dense[b]);
            if best.is_none_or(|(bd, _)| d > bd) {
                best = Some((d, i));
            }
        }
        let Some((_, i)) = best else { break };
        let pos = chosen.partition_point(|&j| j < i);
        chosen.insert(pos, i);
    }
    chosen.into_iter().map(|i| dense[i]).collect()
}

fn farthest_pair(pts: &[Point], idx: &[usize]) -> Vec<usize> {
    let mut best = (f64::NEG_INFINITY, idx[0], idx[0]);
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            let d = dist(pts[i], pts[j]);
            if d > best.0 {
                best = (d, i, j);
            }
        }
    }
    alloc::vec![best.1.min(best.2), best.1.max(best.2)]
}

/// True when `p` lies in the polygon kernel (inside every edge half-plane).
pub fn is_star_shaped_about(c: &Contour, p: Point) -> bool {
    let orient = c.signed_area().signum();
    c.edges().all(|(a, b)| cross(a, b, p) * orient >= 0.0)
}
