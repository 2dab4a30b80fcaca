//! Multi-task loss weighting over per-epoch loss histories.

use alloc::collections::VecDeque;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{bail, Result};

pub const DEFAULT_WINDOW: usize = 5;
pub const VARIANCE_FLOOR: f64 = 1e-8;

/// Sliding window of the most recent epoch losses for each task.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskLossHistory {
    window: usize,
    epoch: usize,
    tasks: Vec<VecDeque<f64>>,
}

impl TaskLossHistory {
    pub fn new(num_tasks: usize, window: usize) -> Result<Self> {
        if num_tasks == 0 {
            bail!(InvalidParameter, "loss history needs at least one task");
        }
        if window < 2 {
            bail!(InvalidParameter, "loss history window must hold at least 2 epochs, got {window}");
        }
        Ok(Self { window, epoch: 0, tasks: alloc::vec![VecDeque::with_capacity(window); num_tasks] })
    }

    /// Appends one epoch of losses, one per task.
    pub fn push_epoch(&mut self, losses: &[f64]) -> Result<()> {
        if losses.len() != self.tasks.len() {
            bail!(ShapeMismatch, "{} losses for {} tasks", losses.len(), self.tasks.len());
        }
        if let Some(l) = losses.iter().find(|l| !l.is_finite() || **l < 0.0) {
            bail!(InvalidParameter, "task losses must be finite and non-negative, got {l}");
        }
        for (buf, &l) in self.tasks.iter_mut().zip(losses) {
            if buf.len() == self.window {
                buf.pop_front();
            }
            buf.push_back(l);
        }
        self.epoch += 1;
        Ok(())
    }

    pub fn num_tasks(&self) -> usize {
        self.tasks.len()
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn epoch(&self) -> usize {
        self.epoch
    }

    pub fn task(&self, i: usize) -> &VecDeque<f64> {
        &self.tasks[i]
    }

    /// Sample variance (`m − 1` divisor) of each task's window.
    pub fn variances(&self) -> Result<Vec<f64>> {
        let m = self.tasks[0].len();
        if m < 2 {
            bail!(InvalidParameter, "variance needs at least 2 epochs, have {m}");
        }
        Ok(self
            .tasks
            .iter()
            .map(|buf| {
                let mean = buf.iter().sum::<f64>() / m as f64;
                buf.iter().map(|l| (l - mean) * (l - mean)).sum::<f64>() / (m - 1) as f64
            })
            .collect())
    }
}

/// `1 / max(variance, floor)` per task.
pub fn varnorm_weights(h: &TaskLossHistory, floor: f64) -> Result<Vec<f64>> {
    if !(floor > 0.0) {
        bail!(InvalidParameter, "variance floor must be positive, got {floor}");
    }
    Ok(h.variances()?.into_iter().map(|v| 1.0 / v.max(floor)).collect())
}

/// [`varnorm_weights`] rescaled to sum to the number of tasks.
pub fn varnorm_weights_normalized(h: &TaskLossHistory, floor: f64) -> Result<Vec<f64>> {
    let w = varnorm_weights(h, floor)?;
    let total: f64 = w.iter().sum();
    let k = w.len() as f64;
    Ok(w.into_iter().map(|v| v * k / total).collect())
}

/// `Σ L_i / (2σ_i²) + log(1 + σ_i)`.
pub fn uncertainty_weighted_total(losses: &[f64], sigmas: &[f64]) -> Result<f64> {
    if losses.len() != sigmas.len() {
        bail!(ShapeMismatch, "{} losses for {} noise parameters", losses.len(), sigmas.len());
    }
    if let Some(s) = sigmas.iter().find(|s| !(**s > 0.0)) {
        bail!(InvalidParameter, "noise parameters must be positive, got {s}");
    }
    Ok(losses.iter().zip(sigmas).map(|(l, s)| l / (2.0 * s * s) + s.ln_1p()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn history(rows: &[&[f64]]) -> TaskLossHistory {
        let mut h = TaskLossHistory::new(rows[0].len(), DEFAULT_WINDOW).unwrap();
        for r in rows {
            h.push_epoch(r).unwrap();
        }
        h
    }

    #[test]
    fn uncertainty_examples() {
        let ln2 = 2f64.ln();
        assert_abs_diff_eq!(uncertainty_weighted_total(&[0.0, 0.0], &[1.0, 1.0]).unwrap(), 2.0 * ln2, epsilon = 1e-15);
        assert_abs_diff_eq!(
            uncertainty_weighted_total(&[1.0, 0.0], &[1.0, 1.0]).unwrap(),
            0.5 + 2.0 * ln2,
            epsilon = 1e-15
        );
        assert!(uncertainty_weighted_total(&[1.0], &[0.0]).is_err());
        let mut prev = f64::INFINITY;
        for s in [0.5, 1.0, 2.0, 10.0, 100.0] {
            let data = uncertainty_weighted_total(&[3.0], &[s]).unwrap() - s.ln_1p();
            assert!(data < prev);
            prev = data;
        }
        assert!(prev < 2e-4);
    }

    #[test]
    fn varnorm_examples() {
        let h = history(&[&[1.0], &[2.0], &[3.0], &[4.0], &[5.0]]);
        assert_abs_diff_eq!(varnorm_weights(&h, VARIANCE_FLOOR).unwrap()[0], 0.4, epsilon = 1e-15);
        let c = history(&[&[2.0], &[2.0], &[2.0]]);
        assert_eq!(varnorm_weights(&c, VARIANCE_FLOOR).unwrap()[0], 1e8);
        let two = history(&[&[1.0, 2.0], &[2.0, 4.0], &[4.0, 8.0]]);
        let w = varnorm_weights(&two, VARIANCE_FLOOR).unwrap();
        assert_abs_diff_eq!(w[0] / w[1], 4.0, epsilon = 1e-12);
        let n = varnorm_weights_normalized(&two, VARIANCE_FLOOR).unwrap();
        assert_abs_diff_eq!(n[0] + n[1], 2.0, epsilon = 1e-12);
        assert!(varnorm_weights(&history(&[&[1.0]]), VARIANCE_FLOOR).is_err());
    }

    #[test]
    fn window_keeps_last_epochs() {
        let h = history(&[&[9.0], &[1.0], &[2.0], &[3.0], &[4.0], &[5.0]]);
        assert_eq!(h.task(0).iter().copied().collect::<Vec<_>>(), alloc::vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(h.epoch(), 6);
        let mut h = TaskLossHistory::new(1, 5).unwrap();
        assert!(h.push_epoch(&[-1.0]).is_err());
        assert!(h.push_epoch(&[1.0, 2.0]).is_err());
    }

    proptest! {
        #[test]
        fn permutation_and_scaling(mut v in proptest::collection::vec(0.01f64..10.0, 2..=5), s in 0.1f64..10.0, rot in 0usize..5) {
            let rows: Vec<[f64; 1]> = v.iter().map(|&x| [x]).collect();
            let refs: Vec<&[f64]> = rows.iter().map(|r| &r[..]).collect();
            let base = varnorm_weights(&history(&refs), 1e-300).unwrap()[0];
            let rot = rot % v.len();
            v.rotate_left(rot);
            v.reverse();
            let rows: Vec<[f64; 1]> = v.iter().map(|&x| [x * s]).collect();
            let refs: Vec<&[f64]> = rows.iter().map(|r| &r[..]).collect();
            let scaled = varnorm_weights(&history(&refs), 1e-300).unwrap()[0];
            prop_assert!((scaled * s * s / base - 1.0).abs() < 1e-9);
        }
    }
}
