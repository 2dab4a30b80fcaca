//! Image sampling at sub-pixel positions. Pixel `(x, y)` sits at integer
//! coordinates; samples outside `[0, w-1] × [0, h-1]` clamp to the border.

#[allow(unused_imports)]
use num_traits::Float;

use crate::map::{Image, Map, ScalarMap};

/// Coordinates this close to a lattice point sample that pixel directly.
pub const SNAP_EPS: f64 = 1e-9;

pub fn snap(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() < SNAP_EPS {
        r
    } else {
        v
    }
}

/// `true` when `(u, v)` lies inside the pixel lattice of a `w × h` grid.
pub fn inside(u: f64, v: f64, w: usize, h: usize) -> bool {
    u >= 0.0 && v >= 0.0 && u <= w as f64 - 1.0 && v <= h as f64 - 1.0
}

fn corners(u: f64, v: f64, w: usize, h: usize) -> (usize, usize, usize, usize, f64, f64) {
    let u = u.clamp(0.0, w as f64 - 1.0);
    let v = v.clamp(0.0, h as f64 - 1.0);
    let x0 = u.floor() as usize;
    let y0 = v.floor() as usize;
    let x1 = (x0 + 1).min(w - 1);
    let y1 = (y0 + 1).min(h - 1);
    (x0, y0, x1, y1, u - x0 as f64, v - y0 as f64)
}

fn blend(a: f64, b: f64, c: f64, d: f64, fx: f64, fy: f64) -> f64 {
    if fx == 0.0 && fy == 0.0 {
        return a;
    }
    let top = a * (1.0 - fx) + b * fx;
    let bottom = c * (1.0 - fx) + d * fx;
    top * (1.0 - fy) + bottom * fy
}

pub fn bilinear(img: &Image, c: usize, u: f64, v: f64) -> f64 {
    let (x0, y0, x1, y1, fx, fy) = corners(u, v, img.width(), img.height());
    blend(img.get(x0, y0, c), img.get(x1, y0, c), img.get(x0, y1, c), img.get(x1, y1, c), fx, fy)
}

pub fn bilinear_scalar(map: &ScalarMap, u: f64, v: f64) -> f64 {
    let (x0, y0, x1, y1, fx, fy) = corners(u, v, map.width(), map.height());
    blend(map.at(x0, y0), map.at(x1, y0), map.at(x0, y1), map.at(x1, y1), fx, fy)
}

/// Nearest-neighbour sample, rounding half up.
pub fn nearest<T: Copy>(map: &Map<T>, u: f64, v: f64) -> T {
    let x = ((u + 0.5).floor().max(0.0) as usize).min(map.width() - 1);
    let y = ((v + 0.5).floor().max(0.0) as usize).min(map.height() - 1);
    map.at(x, y)
}

/// Corner-aligned bilinear resize of a scalar map.
pub fn resize_bilinear(map: &ScalarMap, width: usize, height: usize) -> ScalarMap {
    let sx = if width > 1 { (map.width() as f64 - 1.0) / (width as f64 - 1.0) } else { 0.0 };
    let sy = if height > 1 { (map.height() as f64 - 1.0) / (height as f64 - 1.0) } else { 0.0 };
    Map::from_fn(width, height, |x, y| bilinear_scalar(map, x as f64 * sx, y as f64 * sy))
}
