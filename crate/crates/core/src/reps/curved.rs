use core::f64::consts::{PI, TAU};
#[allow(unused_imports)]
use num_traits::Float;

use super::boxes::{fit_oriented_box, OrientedBox};
use alloc::vec::Vec;

use super::contour::{dist, Contour, Point};
use super::raster::{mask_iou, rasterize_fn};
use crate::error::{bail, Result};
use crate::map::Mask;

/// Annular sector: radii `r1 < r2` about `center`, angles `theta1 < theta2`
/// measured from the x axis.
/// Non-negative remainder modulo 2π.
fn rem_tau(a: f64) -> f64 {
    let r = a % TAU;
    if r < 0.0 {
        r + TAU
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvedBox {
    center: Point,
    r1: f64,
    r2: f64,
    theta1: f64,
    theta2: f64,
}

impl CurvedBox {
    pub fn new(center: Point, r1: f64, r2: f64, theta1: f64, theta2: f64) -> Result<Self> {
        if !(r1 >= 0.0 && r1 < r2 && r2.is_finite()) {
            bail!(InvalidParameter, "curved box radii must satisfy 0 <= r1 < r2, got {r1}, {r2}");
        }
        let span = theta2 - theta1;
        if !(span > 0.0 && span < TAU) {
            bail!(InvalidParameter, "curved box angular span must lie in (0, 2π), got {span}");
        }
        Ok(Self { center, r1, r2, theta1, theta2 })
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn radii(&self) -> (f64, f64) {
        (self.r1, self.r2)
    }

    pub fn angles(&self) -> (f64, f64) {
        (self.theta1, self.theta2)
    }

    pub fn contains(&self, p: Point) -> bool {
        let r = dist(p, self.center);
        if r < self.r1 || r > self.r2 {
            return false;
        }
        let phi = (p[1] - self.center[1]).atan2(p[0] - self.center[0]);
        rem_tau(phi - self.theta1) <= self.theta2 - self.theta1
    }

    pub fn area(&self) -> f64 {
        0.5 * (self.theta2 - self.theta1) * (self.r2 * self.r2 - self.r1 * self.r1)
    }
}

const CANDIDATES: usize = 64;
const SEARCH_DIAGONALS: f64 = 8.0;
const FAR_DIAGONALS: f64 = 1e4;
const REFINE_STEPS: usize = 40;

/// Tightest sector about `center` enclosing `points`, or `None` when the
/// points surround the center.
fn enclosing_sector(points: &[Point], center: Point, toward: Point) -> Option<CurvedBox> {
    let (mut r1, mut r2) = (f64::INFINITY, 0.0f64);
    for &p in points {
        let d = dist(p, center);
        r1 = r1.min(d);
        r2 = r2.max(d);
    }
    if r1 == r2 {
        return None;
    }
    let phi0 = (toward[1] - center[1]).atan2(toward[0] - center[0]);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        let d = rem_tau((p[1] - center[1]).atan2(p[0] - center[0]) - phi0 + PI) - PI;
        lo = lo.min(d);
        hi = hi.max(d);
    }
    if hi - lo >= PI {
        return None;
    }
    CurvedBox::new(center, r1, r2, phi0 + lo, phi0 + hi).ok()
}

fn sector_iou(sector: &CurvedBox, mask: &Mask) -> f64 {
    let r = rasterize_fn(mask.width(), mask.height(), |p| sector.contains(p));
    mask_iou(&r, mask).unwrap_or(0.0)
}

/// Searches circle centres along both oriented-box axes of the contour and
/// keeps the sector enclosing the mask's boundary pixel centres with the
/// highest IoU against `mask`. Ties go to the more distant centre, so
/// straight objects come out box-like.
pub fn fit_curved_box(mask: &Mask, c: &Contour) -> Result<CurvedBox> {
    if mask.count() == 0 {
        bail!(Empty, "curved box fit needs a non-empty mask");
    }
    let obox = fit_oriented_box(c)?;
    let points = boundary_centres(mask);
    let (u, v) = obox.axes();
    let diag = obox.diagonal();
    let base = [obox.cx, obox.cy];
    let at = |axis: Point, s: f64| [base[0] + s * axis[0], base[1] + s * axis[1]];

    struct Best {
        iou: f64,
        s: f64,
        axis: Point,
        sector: CurvedBox,
    }
    let mut best: Option<Best> = None;
    let consider = |axis: Point, s: f64, best: &mut Option<Best>| -> Option<()> {
        let center = at(axis, s);
        if contains_strict(&obox, center) {
            return None;
        }
        let sector = enclosing_sector(&points, center, base)?;
        let iou = sector_iou(&sector, mask);
        let better = match best {
            None => true,
            Some(b) => iou > b.iou + 1e-12 || ((iou - b.iou).abs() <= 1e-12 && s.abs() > b.s.abs()),
        };
        if better {
            *best = Some(Best { iou, s, axis, sector });
        }
        Some(())
    };
    let step = SEARCH_DIAGONALS * diag / CANDIDATES as f64;
    for axis in [v, u] {
        for sign in [1.0, -1.0] {
            for k in 1..=CANDIDATES {
                consider(axis, sign * step * k as f64, &mut best);
            }
            consider(axis, sign * FAR_DIAGONALS * diag, &mut best);
        }
    }
    let Some(found) = best else {
        bail!(Degenerate, "no valid circle centre along the box axes");
    };
    if found.s.abs() > SEARCH_DIAGONALS * diag {
        return Ok(found.sector);
    }
    // golden-section refinement between the neighbouring grid candidates
    let (axis, sign) = (found.axis, found.s.signum());
    let score = |s: f64| -> f64 {
        let center = at(axis, sign * s);
        if contains_strict(&obox, center) {
            return -1.0;
        }
        enclosing_sector(&points, center, base).map_or(-1.0, |sec| sector_iou(&sec, mask))
    };
    let (mut a, mut b) = ((found.s.abs() - step).max(0.0), found.s.abs() + step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut x1, mut x2) = (b - g * (b - a), a + g * (b - a));
    let (mut f1, mut f2) = (score(x1), score(x2));
    for _ in 0..REFINE_STEPS {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = score(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = score(x2);
        }
    }
    let mut best = Some(found);
    consider(axis, sign * x1, &mut best);
    consider(axis, sign * x2, &mut best);
    Ok(best.expect("seeded").sector)
}

fn boundary_centres(mask: &Mask) -> Vec<Point> {
    let (w, h) = mask.dims();
    let fg = |x: isize, y: isize| {
        x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h && mask.at(x as usize, y as usize)
    };
    let mut out = Vec::new();
    for y in 0..h as isize {
        for x in 0..w as isize {
            if fg(x, y) && !(fg(x - 1, y) && fg(x + 1, y) && fg(x, y - 1) && fg(x, y + 1)) {
                out.push([x as f64 + 0.5, y as f64 + 0.5]);
            }
        }
    }
    out
}

fn contains_strict(b: &OrientedBox, p: Point) -> bool {
    let (u, v) = b.axes();
    let d = [p[0] - b.cx, p[1] - b.cy];
    (d[0] * u[0] + d[1] * u[1]).abs() < 0.5 * b.w && (d[0] * v[0] + d[1] * v[1]).abs() < 0.5 * b.h
}
