use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::contour::Point;
use crate::map::{Map, Mask};

/// Even-odd fill sampled at pixel centres.
pub fn rasterize_polygon(vertices: &[Point], width: usize, height: usize) -> Mask {
    let mut mask = Map::filled(width, height, false);
    let n = vertices.len();
    if n < 3 {
        return mask;
    }
    let mut xs = Vec::new();
    for y in 0..height {
        let yc = y as f64 + 0.5;
        xs.clear();
        for i in 0..n {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            if (a[1] <= yc && yc < b[1]) || (b[1] <= yc && yc < a[1]) {
                xs.push(a[0] + (yc - a[1]) * (b[0] - a[0]) / (b[1] - a[1]));
            }
        }
        xs.sort_by(f64::total_cmp);
        for pair in xs.chunks_exact(2) {
            let lo = (pair[0] - 0.5).ceil().max(0.0);
            let hi = (pair[1] - 0.5).ceil().min(width as f64);
            let mut x = lo;
            while x < hi {
                mask.set(x as usize, y, true);
                x += 1.0;
            }
        }
    }
    mask
}

/// Rasterises any pixel-centre inclusion test.
pub fn rasterize_fn(width: usize, height: usize, inside: impl Fn(Point) -> bool) -> Mask {
    Map::from_fn(width, height, |x, y| inside([x as f64 + 0.5, y as f64 + 0.5]))
}

/// `|a ∩ b| / |a ∪ b|`, or `None` for an empty union.
pub fn mask_iou(a: &Mask, b: &Mask) -> Option<f64> {
    let (mut inter, mut union) = (0usize, 0usize);
    for (&p, &q) in a.data().iter().zip(b.data()) {
        inter += usize::from(p && q);
        union += usize::from(p || q);
    }
    (union > 0).then(|| inter as f64 / union as f64)
}
