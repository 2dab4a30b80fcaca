use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
#[allow(unused_imports)]
use num_traits::Float;

use super::contour::{cross, Contour, Point};
use crate::error::{bail, Result};

/// Axis-aligned box given by centre and size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardBox {
    pub cx: f64,
    pub cy: f64,
    pub w: f64,
    pub h: f64,
}

impl StandardBox {
    pub fn contains(&self, p: Point) -> bool {
        (p[0] - self.cx).abs() <= 0.5 * self.w && (p[1] - self.cy).abs() <= 0.5 * self.h
    }

    pub fn corners(&self) -> [Point; 4] {
        let (hw, hh) = (0.5 * self.w, 0.5 * self.h);
        [
            [self.cx - hw, self.cy - hh],
            [self.cx + hw, self.cy - hh],
            [self.cx + hw, self.cy + hh],
            [self.cx - hw, self.cy + hh],
        ]
    }
}

/// Rotated box: `w ≥ h`, `theta` is the direction of the `w` side in
/// (−π/2, π/2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedBox {
    pub cx: f64,
    pub cy: f64,
    pub w: f64,
    pub h: f64,
    pub theta: f64,
}

impl OrientedBox {
    pub fn axes(&self) -> (Point, Point) {
        let (s, c) = self.theta.sin_cos();
        ([c, s], [-s, c])
    }

    pub fn contains(&self, p: Point) -> bool {
        let (u, v) = self.axes();
        let d = [p[0] - self.cx, p[1] - self.cy];
        let a = d[0] * u[0] + d[1] * u[1];
        let b = d[0] * v[0] + d[1] * v[1];
        let eps = 1e-9 * (1.0 + self.w);
        a.abs() <= 0.5 * self.w + eps && b.abs() <= 0.5 * self.h + eps
    }

    pub fn corners(&self) -> [Point; 4] {
        let (u, v) = self.axes();
        let (hw, hh) = (0.5 * self.w, 0.5 * self.h);
        let at = |a: f64, b: f64| [self.cx + a * u[0] + b * v[0], self.cy + a * u[1] + b * v[1]];
        [at(-hw, -hh), at(hw, -hh), at(hw, hh), at(-hw, hh)]
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn diagonal(&self) -> f64 {
        self.w.hypot(self.h)
    }
}

pub fn fit_standard_box(c: &Contour) -> Result<StandardBox> {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in c.vertices() {
        x0 = x0.min(p[0]);
        y0 = y0.min(p[1]);
        x1 = x1.max(p[0]);
        y1 = y1.max(p[1]);
    }
    if x1 - x0 <= 0.0 || y1 - y0 <= 0.0 {
        bail!(Degenerate, "contour bounding box has zero extent ({} x {})", x1 - x0, y1 - y0);
    }
    Ok(StandardBox { cx: 0.5 * (x0 + x1), cy: 0.5 * (y0 + y1), w: x1 - x0, h: y1 - y0 })
}

/// Andrew's monotone chain, counter-clockwise in a y-up frame.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut p = points.to_vec();
    p.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * p.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: &mut dyn Iterator<Item = &Point> = if pass == 0 { &mut p.iter() } else { &mut p.iter().rev() };
        for &q in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    hull
}

pub(crate) fn normalize_half_turn(mut t: f64) -> f64 {
    while t > FRAC_PI_2 {
        t -= PI;
    }
    while t <= -FRAC_PI_2 {
        t += PI;
    }
    t
}

/// Minimum-area enclosing rectangle by rotating calipers over hull edges.
pub fn fit_oriented_box(c: &Contour) -> Result<OrientedBox> {
    let hull = convex_hull(c.vertices());
    if hull.len() < 3 {
        bail!(Degenerate, "contour is collinear");
    }
    let n = hull.len();
    let mut best: Option<(f64, OrientedBox)> = None;
    for i in 0..n {
        let (a, b) = (hull[i], hull[(i + 1) % n]);
        let ang = (b[1] - a[1]).atan2(b[0] - a[0]);
        let (s, co) = ang.sin_cos();
        let (mut u0, mut u1, mut v0, mut v1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in &hull {
            let u = p[0] * co + p[1] * s;
            let v = -p[0] * s + p[1] * co;
            u0 = u0.min(u);
            u1 = u1.max(u);
            v0 = v0.min(v);
            v1 = v1.max(v);
        }
        let area = (u1 - u0) * (v1 - v0);
        if best.as_ref().is_some_and(|(a, _)| *a <= area) {
            continue;
        }
        let (um, vm) = (0.5 * (u0 + u1), 0.5 * (v0 + v1));
        let (cx, cy) = (um * co - vm * s, um * s + vm * co);
        let (mut w, mut h, mut theta) = (u1 - u0, v1 - v0, ang);
        if h > w {
            core::mem::swap(&mut w, &mut h);
            theta += FRAC_PI_2;
        }
        best = Some((area, OrientedBox { cx, cy, w, h, theta: normalize_half_turn(theta) }));
    }
    let (area, obox) = best.expect("hull has edges");
    if area <= 0.0 {
        bail!(Degenerate, "contour encloses no area");
    }
    Ok(obox)
}
