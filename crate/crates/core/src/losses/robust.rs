use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{bail, Result};

/// Shape `rho` and scale `c > 0` of the general robust penalty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobustLossParams {
    pub rho: f64,
    pub scale: f64,
}

impl Default for RobustLossParams {
    /// Pseudo-Huber shape with a scale suited to [0, 1] intensities.
    fn default() -> Self {
        Self { rho: 1.0, scale: 0.1 }
    }
}

impl RobustLossParams {
    pub fn new(rho: f64, scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            bail!(InvalidParameter, "robust loss scale must be positive, got {scale}");
        }
        if !rho.is_finite() {
            bail!(InvalidParameter, "robust loss shape must be finite, got {rho}");
        }
        Ok(Self { rho, scale })
    }
}

/// `|ρ−2|/ρ · (((ζ/c)²/|ρ−2| + 1)^(ρ/2) − 1)` with the analytic limits at
/// ρ = 0 and ρ = 2.
pub fn robust_loss(zeta: f64, p: RobustLossParams) -> f64 {
    let x = zeta / p.scale;
    let x2 = x * x;
    if p.rho == 2.0 {
        return 0.5 * x2;
    }
    if p.rho == 0.0 {
        return (0.5 * x2).ln_1p();
    }
    let b = (p.rho - 2.0).abs();
    (b / p.rho) * ((0.5 * p.rho) * (x2 / b).ln_1p()).exp_m1()
}

/// d/dζ of [`robust_loss`].
pub fn robust_loss_grad(zeta: f64, p: RobustLossParams) -> f64 {
    let c2 = p.scale * p.scale;
    if p.rho == 2.0 {
        return zeta / c2;
    }
    let b = (p.rho - 2.0).abs();
    let x2 = zeta * zeta / c2;
    (zeta / c2) * ((0.5 * p.rho - 1.0) * (x2 / b).ln_1p()).exp()
}

const TABLE_RHO_MAX: f64 = 4.0;
const PIECE_INTERVALS: usize = 96;
// knots run past the served range so the natural end condition stays clear of it
const TABLE_KNOT_END: f64 = 4.5;

/// Natural cubic splines of `log Z(ρ)` for ρ ∈ [0, 4], where
/// `Z(ρ) = ∫ exp(−f(x, ρ, 1)) dx`. `log Z` is non-smooth at ρ = 0 and
/// ρ = 2, so [0, 2] and [2, 4.5] get separate splines on meshes graded
/// toward those points.
#[derive(Debug, Clone)]
pub struct LogPartition {
    pieces: [Spline; 2],
}

#[derive(Debug, Clone)]
struct Spline {
    knots: Vec<f64>,
    values: Vec<f64>,
    second: Vec<f64>,
}

impl Spline {
    fn tabulate(knots: Vec<f64>) -> Self {
        let values: Vec<f64> = knots.iter().map(|&r| log_partition_quadrature(r)).collect();
        let second = natural_spline_second_derivatives(&knots, &values);
        Self { knots, values, second }
    }

    fn eval(&self, x: f64) -> f64 {
        let i = self.knots.partition_point(|&k| k <= x).clamp(1, self.knots.len() - 1) - 1;
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let h = x1 - x0;
        let a = (x1 - x) / h;
        let b = (x - x0) / h;
        a * self.values[i]
            + b * self.values[i + 1]
            + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[i + 1]) * h * h / 6.0
    }
}

impl Default for LogPartition {
    fn default() -> Self {
        Self::new()
    }
}

impl LogPartition {
    pub fn new() -> Self {
        let n = PIECE_INTERVALS;
        let grade = |t: f64| t * t * t * t;
        let low = (0..=n)
            .map(|i| {
                let t = i as f64 / n as f64;
                2.0 * grade(t) / (grade(t) + grade(1.0 - t))
            })
            .collect();
        let high = (0..=n).map(|i| 2.0 + (TABLE_KNOT_END - 2.0) * grade(i as f64 / n as f64)).collect();
        Self { pieces: [Spline::tabulate(low), Spline::tabulate(high)] }
    }

    pub fn log_z(&self, rho: f64) -> Result<f64> {
        if !(0.0..=TABLE_RHO_MAX).contains(&rho) {
            bail!(InvalidParameter, "log-partition table covers rho in [0, {TABLE_RHO_MAX}], got {rho}");
        }
        Ok(self.pieces[usize::from(rho > 2.0)].eval(rho))
    }

    /// Negative log-likelihood `f(ζ, ρ, c) + log c + log Z(ρ)`.
    pub fn nll(&self, zeta: f64, p: RobustLossParams) -> Result<f64> {
        if p.rho < 0.0 {
            bail!(InvalidParameter, "likelihood form needs rho >= 0, got {}", p.rho);
        }
        Ok(robust_loss(zeta, p) + p.scale.ln() + self.log_z(p.rho)?)
    }
}

/// `log Z(ρ)` by adaptive Simpson on `x = u / (1 − u)`.
pub fn log_partition_quadrature(rho: f64) -> f64 {
    let p = RobustLossParams { rho, scale: 1.0 };
    let g = |u: f64| -> f64 {
        if u >= 1.0 {
            return if rho == 0.0 { 2.0 } else { 0.0 };
        }
        let x = u / (1.0 - u);
        (-robust_loss(x, p)).exp() / ((1.0 - u) * (1.0 - u))
    };
    let half = adaptive_simpson(&g, 0.0, 1.0, 1e-13, 48);
    (2.0 * half).ln()
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, eps: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, eps, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
}

fn natural_spline_second_derivatives(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut m = alloc::vec![0.0; n];
    let mut u = alloc::vec![0.0; n];
    for i in 1..n - 1 {
        let sig = (x[i] - x[i - 1]) / (x[i + 1] - x[i - 1]);
        let p = sig * m[i - 1] + 2.0;
        m[i] = (sig - 1.0) / p;
        let d = (y[i + 1] - y[i]) / (x[i + 1] - x[i]) - (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
        u[i] = (6.0 * d / (x[i + 1] - x[i - 1]) - sig * u[i - 1]) / p;
    }
    m[n - 1] = 0.0;
    for k in (0..n - 1).rev() {
        m[k] = m[k] * m[k + 1] + u[k];
    }
    m
}
