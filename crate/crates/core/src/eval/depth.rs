use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{bail, Result};
use crate::map::{Mask, ScalarMap};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthMetrics {
    pub abs_rel: f64,
    pub sq_rel: f64,
    pub rmse: f64,
    pub rmse_log: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
}

impl DepthMetrics {
    pub const NAMES: [&'static str; 7] = ["abs_rel", "sq_rel", "rmse", "rmse_log", "delta1", "delta2", "delta3"];

    pub fn values(&self) -> [f64; 7] {
        [self.abs_rel, self.sq_rel, self.rmse, self.rmse_log, self.delta1, self.delta2, self.delta3]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthEvalConfig {
    /// Ground truth beyond this is ignored and predictions are clamped to it.
    pub cap: f64,
    pub min_depth: f64,
    pub median_scaling: bool,
}

impl DepthEvalConfig {
    pub fn with_cap(cap: f64) -> Self {
        Self { cap, ..Default::default() }
    }
}

impl Default for DepthEvalConfig {
    fn default() -> Self {
        Self { cap: 80.0, min_depth: 1e-3, median_scaling: false }
    }
}

/// Ratio `median(gt) / median(pred)` over the given pairs.
pub fn median_scale(pairs: &[(f64, f64)]) -> Result<f64> {
    if pairs.is_empty() {
        bail!(Empty, "median scaling needs at least one pixel");
    }
    let med = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        let n = v.len();
        if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        }
    };
    let p = med(pairs.iter().map(|x| x.0).collect());
    if !(p > 0.0) {
        bail!(Degenerate, "median prediction is not positive");
    }
    Ok(med(pairs.iter().map(|x| x.1).collect()) / p)
}

/// Pixels count when unmasked and `0 < gt ≤ cap`.
pub fn depth_metrics(
    pred: &ScalarMap,
    gt: &ScalarMap,
    mask: Option<&Mask>,
    cfg: &DepthEvalConfig,
) -> Result<DepthMetrics> {
    if !pred.same_dims(gt) || mask.is_some_and(|m| !m.same_dims(gt)) {
        bail!(ShapeMismatch, "prediction, ground truth and mask must share dimensions");
    }
    if !(cfg.cap > cfg.min_depth && cfg.min_depth > 0.0) {
        bail!(InvalidParameter, "depth cap {} must exceed min depth {} > 0", cfg.cap, cfg.min_depth);
    }
    let mut pairs: Vec<(f64, f64)> = pred
        .data()
        .iter()
        .zip(gt.data())
        .enumerate()
        .filter(|&(i, (_, &g))| g > 0.0 && g <= cfg.cap && mask.is_none_or(|m| m.data()[i]))
        .map(|(_, (&p, &g))| (p, g))
        .collect();
    if pairs.is_empty() {
        bail!(Empty, "no valid ground-truth pixels");
    }
    if cfg.median_scaling {
        let s = median_scale(&pairs)?;
        for p in &mut pairs {
            p.0 *= s;
        }
    }
    let n = pairs.len() as f64;
    let mut m =
        DepthMetrics { abs_rel: 0.0, sq_rel: 0.0, rmse: 0.0, rmse_log: 0.0, delta1: 0.0, delta2: 0.0, delta3: 0.0 };
    for &(p, g) in &pairs {
        let p = p.clamp(cfg.min_depth, cfg.cap);
        let d = p - g;
        m.abs_rel += d.abs() / g;
        m.sq_rel += d * d / g;
        m.rmse += d * d;
        let dl = p.ln() - g.ln();
        m.rmse_log += dl * dl;
        let ratio = (p / g).max(g / p);
        m.delta1 += f64::from(u8::from(ratio < 1.25));
        m.delta2 += f64::from(u8::from(ratio < 1.25 * 1.25));
        m.delta3 += f64::from(u8::from(ratio < 1.25 * 1.25 * 1.25));
    }
    m.abs_rel /= n;
    m.sq_rel /= n;
    m.rmse = (m.rmse / n).sqrt();
    m.rmse_log = (m.rmse_log / n).sqrt();
    m.delta1 /= n;
    m.delta2 /= n;
    m.delta3 /= n;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::Map;
    use approx::assert_abs_diff_eq;

    fn gt() -> ScalarMap {
        Map::from_fn(5, 4, |x, y| 1.0 + x as f64 + 2.0 * y as f64)
    }

    #[test]
    fn perfect_prediction() {
        let m = depth_metrics(&gt(), &gt(), None, &DepthEvalConfig::default()).unwrap();
        assert_eq!(m.values(), [0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn doubled_prediction() {
        let p = gt().map(|v| 2.0 * v);
        let m = depth_metrics(&p, &gt(), None, &DepthEvalConfig::default()).unwrap();
        assert_eq!((m.delta1, m.delta2, m.delta3), (0.0, 0.0, 0.0));
        assert_abs_diff_eq!(m.rmse_log, 2f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(m.abs_rel, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn single_pixel() {
        let m = depth_metrics(&Map::filled(1, 1, 8.0), &Map::filled(1, 1, 10.0), None, &DepthEvalConfig::default())
            .unwrap();
        assert_abs_diff_eq!(m.abs_rel, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(m.rmse, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.sq_rel, 0.4, epsilon = 1e-15);
    }

    #[test]
    fn cap_and_mask_filtering() {
        let g = Map::from_vec(3, 1, alloc::vec![0.0, 5.0, 100.0]).unwrap();
        let p = Map::from_vec(3, 1, alloc::vec![7.0, 5.0, 1.0]).unwrap();
        let m = depth_metrics(&p, &g, None, &DepthEvalConfig::default()).unwrap();
        assert_eq!(m.abs_rel, 0.0);
        let none = Map::filled(3, 1, false);
        assert!(depth_metrics(&p, &g, Some(&none), &DepthEvalConfig::default()).is_err());
    }

    #[test]
    fn median_scaling_removes_global_scale() {
        let p = gt().map(|v| 0.37 * v);
        let cfg = DepthEvalConfig { median_scaling: true, ..Default::default() };
        let m = depth_metrics(&p, &gt(), None, &cfg).unwrap();
        assert!(m.abs_rel < 1e-14);
    }

    #[test]
    fn scale_invariance() {
        let g = gt();
        let p = g.map(|v| v * (1.0 + 0.1 * (v % 3.0)));
        let cfg = DepthEvalConfig::with_cap(1e6);
        let a = depth_metrics(&p, &g, None, &cfg).unwrap();
        let b = depth_metrics(&p.map(|v| 7.0 * v), &g.map(|v| 7.0 * v), None, &cfg).unwrap();
        assert_abs_diff_eq!(a.abs_rel, b.abs_rel, epsilon = 1e-14);
        assert_abs_diff_eq!(a.rmse_log, b.rmse_log, epsilon = 1e-14);
        assert_abs_diff_eq!(7.0 * a.rmse, b.rmse, epsilon = 1e-12);
        assert_eq!((a.delta1, a.delta2, a.delta3), (b.delta1, b.delta2, b.delta3));
    }
}
