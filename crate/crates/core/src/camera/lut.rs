//! Tabulated inverse of the radial function.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::{solve_increasing, CameraModel};
use crate::error::{bail, Error, Result};

/// Uniform table of `θ(r)` on `[0, r_end]`, refined per query.
#[derive(Debug, Clone)]
pub struct InverseLut {
    model: CameraModel,
    step: f64,
    theta: Vec<f64>,
}

impl InverseLut {
    /// Covers `[0, r_max]`, capped at the farthest sensor corner.
    pub fn build(model: &CameraModel, samples: usize) -> Result<Self> {
        if samples < 2 {
            bail!(InvalidParameter, "lookup table needs at least 2 samples, got {samples}");
        }
        let [w, h] = model.size();
        let [cx, cy] = model.principal_point();
        let [ax, ay] = model.intrinsics().aspect;
        let dx = (cx.abs()).max((w as f64 - 1.0 - cx).abs()) / ax;
        let dy = (cy.abs()).max((h as f64 - 1.0 - cy).abs()) / ay;
        let r_end = model.r_max().min(Float::hypot(dx, dy));
        if !(r_end > 0.0) {
            bail!(Degenerate, "lookup table radius range is empty");
        }
        let step = r_end / (samples - 1) as f64;
        let theta =
            (0..samples).map(|i| model.radial_inverse((i as f64 * step).min(r_end))).collect::<Result<Vec<_>>>()?;
        Ok(Self { model: model.clone(), step, theta })
    }

    pub fn r_end(&self) -> f64 {
        self.step * (self.theta.len() - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// Interpolated lookup refined inside the bracketing cell.
    pub fn lookup(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0 && r <= self.r_end()) {
            return Err(Error::Radius { radius: r, max: self.r_end() });
        }
        let pos = r / self.step;
        let i = (pos.floor() as usize).min(self.theta.len() - 2);
        let (t0, t1) = (self.theta[i], self.theta[i + 1]);
        if r == i as f64 * self.step {
            return Ok(t0);
        }
        let p = self.model.projection();
        Ok(solve_increasing(|t| p.radial(t), |t| p.radial_slope(t), r, t0, t1))
    }

    /// Plain linear interpolation, no refinement.
    pub fn lookup_linear(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0 && r <= self.r_end()) {
            return Err(Error::Radius { radius: r, max: self.r_end() });
        }
        let pos = r / self.step;
        let i = (pos.floor() as usize).min(self.theta.len() - 2);
        let f = pos - i as f64;
        Ok(self.theta[i] * (1.0 - f) + self.theta[i + 1] * f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::camera::{Intrinsics, Projection};

    #[test]
    fn lookup_matches_direct_inverse() {
        let m = CameraModel::new(
            Projection::Polynomial4 { k: [339.749, -31.988, 48.275, -7.201] },
            Intrinsics::centered([1280, 966]),
        )
        .unwrap();
        let lut = InverseLut::build(&m, 256).unwrap();
        for i in 0..1000 {
            let r = lut.r_end() * i as f64 / 999.0;
            let a = lut.lookup(r).unwrap();
            let b = m.radial_inverse(r).unwrap();
            assert!((a - b).abs() < 1e-9, "r={r}: {a} vs {b}");
        }
    }

    #[test]
    fn too_few_samples() {
        let m = CameraModel::new(Projection::Equidistant { f: 1.0 }, Intrinsics::centered([4, 4])).unwrap();
        assert!(InverseLut::build(&m, 1).is_err());
    }

    #[test]
    fn unbounded_model_covers_sensor_corner() {
        let m = CameraModel::new(Projection::pinhole(100.0), Intrinsics::centered([101, 51])).unwrap();
        let lut = InverseLut::build(&m, 64).unwrap();
        let corner = Float::hypot(50.0, 25.0);
        assert!((lut.r_end() - corner).abs() < 1e-9);
        assert!(lut.lookup(corner + 1.0).is_err());
    }
}
