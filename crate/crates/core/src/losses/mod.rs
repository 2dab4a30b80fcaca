//! Loss and regulariser formulas reducing maps to scalars.

mod consistency;
mod photometric;
mod robust;
mod smoothness;
mod ssim;

pub use consistency::csdc_loss;
pub use photometric::{percentile, photometric_error, photometric_loss, PhotometricConfig, PhotometricLoss};
pub use robust::{robust_loss, robust_loss_grad, LogPartition, RobustLossParams};
pub use smoothness::{feature_regularizers, smoothness_loss};
pub use ssim::{ssim, SsimConfig};

/// Per-scale loss components; unused terms stay zero.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ScaleLosses {
    pub photometric_forward: f64,
    pub photometric_backward: f64,
    pub distance_consistency: f64,
    pub smoothness: f64,
    pub discriminative: f64,
    pub convergent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveWeights {
    /// smoothness
    pub beta: f64,
    /// distance consistency
    pub gamma: f64,
    /// feature discriminative term
    pub omega: f64,
    /// feature convergent term
    pub mu: f64,
}

impl Default for ObjectiveWeights {
    fn default() -> Self {
        Self { beta: 1e-3, gamma: 1e-3, omega: 1e-3, mu: 1e-3 }
    }
}

impl ScaleLosses {
    pub fn weighted(&self, w: &ObjectiveWeights) -> f64 {
        self.photometric_forward
            + self.photometric_backward
            + w.gamma * self.distance_consistency
            + w.beta * self.smoothness
            + w.omega * self.discriminative
            + w.mu * self.convergent
    }
}

/// `Σ_n L_n / 2^(n−1)`, finest scale first.
pub fn total_objective(scales: &[ScaleLosses], weights: &ObjectiveWeights) -> f64 {
    let mut factor = 1.0;
    let mut total = 0.0;
    for s in scales {
        total += s.weighted(weights) * factor;
        factor *= 0.5;
    }
    total
}
