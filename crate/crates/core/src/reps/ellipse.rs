use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::boxes::{convex_hull, normalize_half_turn};
use super::contour::{Contour, Point};
use crate::error::{bail, Result};
use crate::linalg::sym2_eigen;

/// `semi_major ≥ semi_minor`; `theta` is the major-axis direction in
/// (−π/2, π/2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    pub center: Point,
    pub semi_major: f64,
    pub semi_minor: f64,
    pub theta: f64,
}

impl Ellipse {
    /// Normalised radius squared: ≤ 1 inside.
    pub fn level(&self, p: Point) -> f64 {
        let (s, c) = self.theta.sin_cos();
        let d = [p[0] - self.center[0], p[1] - self.center[1]];
        let u = (d[0] * c + d[1] * s) / self.semi_major;
        let v = (-d[0] * s + d[1] * c) / self.semi_minor;
        u * u + v * v
    }

    pub fn contains(&self, p: Point) -> bool {
        self.level(p) <= 1.0 + 1e-9
    }

    pub fn area(&self) -> f64 {
        core::f64::consts::PI * self.semi_major * self.semi_minor
    }
}

const KHACHIYAN_TOL: f64 = 1e-12;
const KHACHIYAN_MAX_ITER: usize = 100_000;

/// Minimum-volume enclosing ellipse of the contour's hull by Khachiyan's
/// algorithm with away steps, scaled afterwards so every vertex is inside.
pub fn fit_ellipse(c: &Contour) -> Result<Ellipse> {
    let pts = convex_hull(c.vertices());
    if pts.len() < 3 {
        bail!(Degenerate, "ellipse fit needs 3 non-collinear points");
    }
    let n = pts.len();
    // centre coordinates to keep the lifted system well conditioned
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(x, y), p| (x + p[0], y + p[1]));
    let (mx, my) = (mx / n as f64, my / n as f64);
    let scale = pts.iter().map(|p| (p[0] - mx).abs().max((p[1] - my).abs())).fold(0.0, f64::max);
    let q: Vec<[f64; 3]> = pts.iter().map(|p| [(p[0] - mx) / scale, (p[1] - my) / scale, 1.0]).collect();
    let mut u = alloc::vec![1.0 / n as f64; n];
    for _ in 0..KHACHIYAN_MAX_ITER {
        let mut x = [0.0; 9];
        for (qi, &ui) in q.iter().zip(&u) {
            for r in 0..3 {
                for s in 0..3 {
                    x[r * 3 + s] += ui * qi[r] * qi[s];
                }
            }
        }
        let xi = inverse3(&x)?;
        let lev = |qj: &[f64; 3]| {
            let mut m = 0.0;
            for r in 0..3 {
                for s in 0..3 {
                    m += qj[r] * xi[r * 3 + s] * qj[s];
                }
            }
            m
        };
        let (mut jmax, mut mmax) = (0, f64::NEG_INFINITY);
        let (mut jmin, mut mmin) = (0, f64::INFINITY);
        for (j, qj) in q.iter().enumerate() {
            let m = lev(qj);
            if m > mmax {
                mmax = m;
                jmax = j;
            }
            if u[j] > 0.0 && m < mmin {
                mmin = m;
                jmin = j;
            }
        }
        let grow = mmax / 3.0 - 1.0;
        let shrink = 1.0 - mmin / 3.0;
        if grow.max(shrink) < KHACHIYAN_TOL {
            break;
        }
        // Todd–Yıldırım: shift weight toward the worst point or away from
        // the most interior supported one
        let (j, step) = if grow > shrink {
            (jmax, (mmax - 3.0) / (3.0 * (mmax - 1.0)))
        } else {
            let uj = u[jmin];
            (jmin, ((mmin - 3.0) / (3.0 * (mmin - 1.0))).max(-uj / (1.0 - uj)))
        };
        for ui in u.iter_mut() {
            *ui *= 1.0 - step;
        }
        u[j] += step;
        if u[j] < 1e-300 {
            u[j] = 0.0;
        }
    }
    let c0: [f64; 2] = q.iter().zip(&u).fold([0.0, 0.0], |acc, (qi, ui)| [acc[0] + ui * qi[0], acc[1] + ui * qi[1]]);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (qi, ui) in q.iter().zip(&u) {
        sxx += ui * qi[0] * qi[0];
        sxy += ui * qi[0] * qi[1];
        syy += ui * qi[1] * qi[1];
    }
    let (a, b, cc) = (sxx - c0[0] * c0[0], sxy - c0[0] * c0[1], syy - c0[1] * c0[1]);
    let det = a * cc - b * b;
    if !(det > 1e-14) {
        bail!(Degenerate, "ellipse fit is singular");
    }
    // shape matrix A = (1/d) S^{-1}, d = 2
    let (ia, ib, ic) = (cc / det / 2.0, -b / det / 2.0, a / det / 2.0);
    let (lsmall, llarge, ang_large) = sym2_eigen(ia, ib, ic);
    let mut e = Ellipse {
        center: [mx + c0[0] * scale, my + c0[1] * scale],
        semi_major: scale / lsmall.sqrt(),
        semi_minor: scale / llarge.sqrt(),
        theta: normalize_half_turn(ang_large + core::f64::consts::FRAC_PI_2),
    };
    let worst = pts.iter().map(|&p| e.level(p)).fold(0.0, f64::max);
    if worst > 1.0 {
        let k = worst.sqrt();
        e.semi_major *= k;
        e.semi_minor *= k;
    }
    Ok(e)
}

fn inverse3(m: &[f64; 9]) -> Result<[f64; 9]> {
    let c = |r: usize, s: usize| m[r * 3 + s];
    let cof = [
        c(1, 1) * c(2, 2) - c(1, 2) * c(2, 1),
        c(0, 2) * c(2, 1) - c(0, 1) * c(2, 2),
        c(0, 1) * c(1, 2) - c(0, 2) * c(1, 1),
        c(1, 2) * c(2, 0) - c(1, 0) * c(2, 2),
        c(0, 0) * c(2, 2) - c(0, 2) * c(2, 0),
        c(0, 2) * c(1, 0) - c(0, 0) * c(1, 2),
        c(1, 0) * c(2, 1) - c(1, 1) * c(2, 0),
        c(0, 1) * c(2, 0) - c(0, 0) * c(2, 1),
        c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0),
    ];
    let det = c(0, 0) * cof[0] + c(0, 1) * cof[3] + c(0, 2) * cof[6];
    if !(det.abs() > 1e-14) {
        bail!(Singular, "ellipse moment matrix is singular");
    }
    Ok(cof.map(|v| v / det))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::PI;
    use proptest::prelude::*;

    #[test]
    fn circle_contour() {
        let pts: Vec<Point> = (0..64)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / 64.0;
                [30.0 + 12.0 * a.cos(), 20.0 + 12.0 * a.sin()]
            })
            .collect();
        let e = fit_ellipse(&Contour::new(pts).unwrap()).unwrap();
        assert_abs_diff_eq!(e.semi_major, 12.0, epsilon = 1e-6);
        assert_abs_diff_eq!(e.semi_minor, 12.0, epsilon = 1e-6);
        assert_abs_diff_eq!(e.center[0], 30.0, epsilon = 1e-9);
    }

    #[test]
    fn rectangle_contour() {
        let pts = alloc::vec![[0.0, 0.0], [20.0, 0.0], [20.0, 8.0], [0.0, 8.0]];
        let e = fit_ellipse(&Contour::new(pts.clone()).unwrap()).unwrap();
        assert!(e.area() >= PI * 20.0 * 8.0 / 4.0);
        assert!(pts.iter().all(|&p| e.contains(p)));
        // the minimum ellipse of a rectangle has semi-axes w/√2, h/√2
        assert_abs_diff_eq!(e.semi_major, 20.0 / 2f64.sqrt(), epsilon = 1e-4);
        assert_abs_diff_eq!(e.theta, 0.0, epsilon = 1e-6);
    }

    #[test]
    fn rejects_collinear() {
        let c = Contour::new(alloc::vec![[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).unwrap();
        assert!(fit_ellipse(&c).is_err());
    }

    proptest! {
        #[test]
        fn contains_all_vertices(pts in proptest::collection::vec((0.0f64..40.0, 0.0f64..40.0), 5..25)) {
            let pts: Vec<Point> = pts.into_iter().map(|(x, y)| [x, y]).collect();
            let hull = convex_hull(&pts);
            prop_assume!(hull.len() >= 3);
            let Ok(c) = Contour::new(hull) else { return Ok(()) };
            let e = fit_ellipse(&c).unwrap();
            for p in &pts {
                prop_assert!(e.level(*p) <= 1.0 + 1e-9);
            }
        }
    }
}
