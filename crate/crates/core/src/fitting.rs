//! Fitting one radial model to samples of another, and the closed-form
//! equivalences between model families.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
#[allow(unused_imports)]
use num_traits::Float;

use crate::camera::{CameraModel, Intrinsics, ModelKind, Projection};
use crate::error::{bail, Error, Result};
use crate::geom::Vec3;
use crate::linalg;

/// Grid size used by the equivalence checks.
pub const EQUIVALENCE_SAMPLES: usize = 512;

/// `(θ, r)` pairs sorted by θ.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSamples {
    theta: Vec<f64>,
    r: Vec<f64>,
    pub source: String,
}

impl RadialSamples {
    /// Sorts by θ; duplicate angles, negative values and non-finite
    /// entries are rejected.
    pub fn new(mut pairs: Vec<(f64, f64)>, source: impl Into<String>) -> Result<Self> {
        if pairs.iter().any(|&(t, r)| !t.is_finite() || !r.is_finite() || t < 0.0 || r < 0.0) {
            bail!(InvalidParameter, "samples must be finite and non-negative");
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            bail!(InvalidParameter, "duplicate field angle in samples");
        }
        let (theta, r) = pairs.into_iter().unzip();
        Ok(Self { theta, r, source: source.into() })
    }

    /// `n` uniform samples of a model on `[0, theta_end]`.
    pub fn from_model(model: &CameraModel, n: usize, theta_end: f64) -> Result<Self> {
        if n < 2 {
            bail!(InvalidParameter, "need at least 2 samples, got {n}");
        }
        let pairs = (0..n)
            .map(|i| {
                let t = theta_end * i as f64 / (n - 1) as f64;
                model.radial_forward(t).map(|r| (t, r))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(pairs, model.describe())
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn theta_end(&self) -> f64 {
        self.theta.last().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub model: CameraModel,
    /// `r_fit(θ_i) − r_i` in sample order.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub rms_residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub max_iterations: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { max_iterations: 500 }
    }
}

/// Free parameters for a family, as full parameter vectors.
fn expand(kind: ModelKind, q: &[f64]) -> Vec<f64> {
    match kind {
        ModelKind::Pinhole => alloc::vec![q[0], q[0], 0.0, 0.0, 0.0, 0.0, 0.0],
        ModelKind::ExtOrthographic => alloc::vec![q[0], 0.0],
        _ => q.to_vec(),
    }
}

fn initial_guess(kind: ModelKind, s: &RadialSamples) -> Result<Vec<f64>> {
    let (num, den) = s.theta.iter().zip(&s.r).fold((0.0, 0.0), |(n, d), (&t, &r)| (n + t * r, d + t * t));
    if !(den > 0.0) {
        bail!(Degenerate, "samples need a non-zero field angle");
    }
    let slope = num / den;
    Ok(match kind {
        ModelKind::Pinhole
        | ModelKind::Equidistant
        | ModelKind::Stereographic
        | ModelKind::Orthographic
        | ModelKind::ExtOrthographic => alloc::vec![slope],
        ModelKind::Polynomial4 => {
            let rows: Vec<f64> = s.theta.iter().flat_map(|&t| [t, t * t, t * t * t, t * t * t * t]).collect();
            linalg::least_squares(s.len(), 4, &rows, &s.r)?
        }
        ModelKind::Division => alloc::vec![0.5 / (4.0 * slope * slope), slope],
        ModelKind::Fov => alloc::vec![1.0, slope / (2.0 * 0.5f64.tan())],
        ModelKind::Ucm => alloc::vec![1.5 * slope, 0.5],
        ModelKind::Eucm => alloc::vec![slope, 0.5, 1.0],
        ModelKind::DoubleSphere => alloc::vec![slope, 0.0, 0.5],
    })
}

fn free_param_count(kind: ModelKind) -> usize {
    match kind {
        ModelKind::Pinhole | ModelKind::ExtOrthographic => 1,
        k => k.param_names().len(),
    }
}

struct Problem<'a> {
    kind: ModelKind,
    samples: &'a RadialSamples,
    scale: Vec<f64>,
}

impl Problem<'_> {
    fn projection(&self, q: &[f64]) -> Option<Projection> {
        let p: Vec<f64> = q.iter().zip(&self.scale).map(|(a, b)| a * b).collect();
        Projection::from_params(self.kind, &expand(self.kind, &p)).ok()
    }

    /// Residual vector, or `None` when the parameters leave the family's
    /// valid region on the sampled range.
    fn residuals(&self, q: &[f64]) -> Option<Vec<f64>> {
        let proj = self.projection(q)?;
        if CameraModel::new(proj.clone(), Intrinsics::centered([1, 1])).is_err() && self.kind != ModelKind::Polynomial4
        {
            return None;
        }
        let mut out = Vec::with_capacity(self.samples.len());
        let mut prev = -1.0;
        for (&t, &r) in self.samples.theta.iter().zip(&self.samples.r) {
            let v = proj.radial(t);
            if !v.is_finite() || v <= prev {
                return None;
            }
            prev = v;
            out.push(v - r);
        }
        Some(out)
    }
}

fn cost(res: &[f64]) -> f64 {
    0.5 * res.iter().map(|r| r * r).sum::<f64>()
}

/// Least-squares fit of `family` to `samples` by Levenberg–Marquardt with
/// central-difference Jacobians in scaled parameter space.
pub fn fit_radial(
    samples: &RadialSamples,
    family: ModelKind,
    intrinsics: Intrinsics,
    opts: FitOptions,
) -> Result<FitReport> {
    let np = free_param_count(family);
    if samples.len() < np {
        bail!(InvalidParameter, "{family} needs at least {np} samples, got {}", samples.len());
    }
    let p0 = initial_guess(family, samples)?;
    let scale: Vec<f64> = p0.iter().map(|&v| if v.abs() > 1e-300 { v.abs() } else { 1.0 }).collect();
    let prob = Problem { kind: family, samples, scale };
    let mut q: Vec<f64> = p0.iter().zip(&prob.scale).map(|(a, b)| a / b).collect();
    let mut res = prob
        .residuals(&q)
        .ok_or_else(|| Error::Degenerate(alloc::format!("initial {family} guess is invalid on the sample range")))?;
    let mut c = cost(&res);
    let n = samples.len();
    let mut lambda = 1e-3;
    let mut iterations = 0;
    let mut converged = c == 0.0;
    let mut first = true;
    while !converged && iterations < opts.max_iterations {
        iterations += 1;
        // Jacobian, n × np row-major
        let mut jac = alloc::vec![0.0; n * np];
        for k in 0..np {
            let h = 1e-6 * q[k].abs().max(1e-3);
            let mut qp = q.clone();
            qp[k] += h;
            let mut qm = q.clone();
            qm[k] -= h;
            let (col, denom) = match (prob.residuals(&qp), prob.residuals(&qm)) {
                (Some(a), Some(b)) => (a.iter().zip(&b).map(|(x, y)| x - y).collect::<Vec<_>>(), 2.0 * h),
                (Some(a), None) => (a.iter().zip(&res).map(|(x, y)| x - y).collect(), h),
                (None, Some(b)) => (res.iter().zip(&b).map(|(x, y)| x - y).collect(), h),
                (None, None) => bail!(Degenerate, "{family} Jacobian undefined at current parameters"),
            };
            for i in 0..n {
                jac[i * np + k] = col[i] / denom;
            }
        }
        let mut jtj = alloc::vec![0.0; np * np];
        let mut g = alloc::vec![0.0; np];
        for i in 0..n {
            let row = &jac[i * np..(i + 1) * np];
            for a in 0..np {
                g[a] += row[a] * res[i];
                for b in 0..np {
                    jtj[a * np + b] += row[a] * row[b];
                }
            }
        }
        if first {
            linalg::solve(np, &jtj, &g, 1e-13)
                .map_err(|_| Error::Singular(alloc::format!("{family} normal equations")))?;
            first = false;
        }
        let dmax = (0..np).map(|k| jtj[k * np + k]).fold(0.0, f64::max);
        loop {
            let mut a = jtj.clone();
            for k in 0..np {
                a[k * np + k] += lambda * jtj[k * np + k].max(1e-12 * dmax);
            }
            let neg_g: Vec<f64> = g.iter().map(|v| -v).collect();
            let step = match linalg::solve(np, &a, &neg_g, 1e-300) {
                Ok(s) => s,
                Err(_) => {
                    lambda *= 10.0;
                    if lambda > 1e16 {
                        converged = true;
                        break;
                    }
                    continue;
                }
            };
            let trial: Vec<f64> = q.iter().zip(&step).map(|(a, b)| a + b).collect();
            match prob.residuals(&trial) {
                Some(tr) if cost(&tr) < c => {
                    let c_new = cost(&tr);
                    let small_step = step.iter().zip(&q).all(|(s, v)| s.abs() <= 1e-13 * (v.abs() + 1e-13));
                    let small_gain = c - c_new <= 1e-15 * c;
                    q = trial;
                    res = tr;
                    c = c_new;
                    lambda = (lambda / 3.0).max(1e-15);
                    if small_step || small_gain || c == 0.0 {
                        converged = true;
                    }
                    break;
                }
                _ => {
                    lambda *= 4.0;
                    if lambda > 1e16 {
                        converged = true;
                        break;
                    }
                }
            }
        }
    }
    if !converged {
        bail!(NoConvergence, "{family} fit after {iterations} iterations");
    }
    let proj = prob.projection(&q).ok_or_else(|| Error::Degenerate("fitted parameters invalid".into()))?;
    let model = match proj {
        Projection::Polynomial4 { .. } => CameraModel::with_theta_max(proj, intrinsics, samples.theta_end().max(1e-6))?,
        _ => {
            let m = CameraModel::new(proj, intrinsics)?;
            if !m.in_domain(samples.theta_end()) {
                bail!(Degenerate, "fitted {family} domain ends at {} before last sample", m.theta_max());
            }
            m
        }
    };
    let max_residual = res.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let rms_residual = (2.0 * c / n as f64).sqrt();
    Ok(FitReport { model, residuals: res, max_residual, rms_residual, iterations })
}

/// `(f_p, f_e)` such that the field-of-view undistortion equals a pinhole of
/// focal `f_p` composed with an equidistant lens of focal `f_e`, in
/// normalised units.
pub fn equidistant_fov_params(omega: f64) -> Result<(f64, f64)> {
    if !(omega > 0.0 && omega < PI) {
        bail!(InvalidParameter, "omega must lie in (0, pi), got {omega}");
    }
    let f_p = 1.0 / (2.0 * (0.5 * omega).tan());
    if !f_p.is_finite() || f_p <= 1e-12 {
        bail!(InvalidParameter, "omega {omega} too close to pi");
    }
    Ok((f_p, 1.0 / omega))
}

/// Max `|r_u^FOV(r_d) − f_p tan(r_d / f_e)| / max(1, |r_u^FOV|)` over
/// `r_d < 0.99·π/(2ω)`. Near the pole r_u is large, hence the scaling.
pub fn equidistant_fov_deviation(omega: f64) -> Result<f64> {
    let (f_p, f_e) = equidistant_fov_params(omega)?;
    let end = 0.99 * FRAC_PI_2 / omega;
    Ok(grid(end)
        .map(|rd| {
            let fov = (rd * omega).tan() / (2.0 * (0.5 * omega).tan());
            (fov - f_p * (rd / f_e).tan()).abs() / fov.abs().max(1.0)
        })
        .fold(0.0, f64::max))
}

fn grid(end: f64) -> impl Iterator<Item = f64> {
    (0..EQUIVALENCE_SAMPLES).map(move |i| end * i as f64 / (EQUIVALENCE_SAMPLES - 1) as f64)
}

/// Pinhole radius of a stereographic image radius, through the division
/// form with `a = 1/(4 f_s²)` and scale `f_p / f_s`.
pub fn stereographic_to_pinhole_division(r_d: f64, f_s: f64, f_p: f64) -> f64 {
    (f_p / f_s) * r_d / (1.0 - r_d * r_d / (4.0 * f_s * f_s))
}

/// Max deviation, relative to `max(1, r_u)`, between
/// `stereographic⁻¹ ∘ pinhole` and the scaled division model over 512
/// field angles up to `0.99·π/2`.
pub fn stereographic_division_check(f_s: f64, f_p: f64) -> Result<f64> {
    if !(f_s > 0.0 && f_p > 0.0) {
        bail!(InvalidParameter, "focal lengths must be positive");
    }
    Ok(grid(0.99 * FRAC_PI_2)
        .map(|theta| {
            let r_d = 2.0 * f_s * (0.5 * theta).tan();
            let composed = f_p * (2.0 * (r_d / (2.0 * f_s)).atan()).tan();
            (composed - stereographic_to_pinhole_division(r_d, f_s, f_p)).abs() / composed.abs().max(1.0)
        })
        .fold(0.0, f64::max))
}

fn max_radial_deviation(a: &Projection, b: &Projection, theta_end: f64) -> f64 {
    grid(theta_end).map(|t| (a.radial(t) - b.radial(t)).abs()).fold(0.0, f64::max)
}

/// UCM with ξ = 0 against a distortion-free pinhole with `f = γ`.
pub fn ucm_pinhole_check(gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        bail!(InvalidParameter, "gamma must be positive");
    }
    Ok(max_radial_deviation(&Projection::Ucm { gamma, xi: 0.0 }, &Projection::pinhole(gamma), 0.99 * FRAC_PI_2))
}

/// UCM with ξ = 1, γ = 2 f_s against stereographic `f_s`.
pub fn ucm_stereographic_check(f_s: f64) -> Result<f64> {
    if !(f_s > 0.0) {
        bail!(InvalidParameter, "f_s must be positive");
    }
    Ok(max_radial_deviation(
        &Projection::Ucm { gamma: 2.0 * f_s, xi: 1.0 },
        &Projection::Stereographic { f: f_s },
        0.99 * PI,
    ))
}

/// 3D line `point + t·direction`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line3 {
    pub point: Vec3,
    pub direction: Vec3,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveFit {
    Circle {
        center: [f64; 2],
        radius: f64,
    },
    /// The line's plane contains the optical axis: infinite radius.
    Straight,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineCircleReport {
    pub fit: CurveFit,
    pub max_residual: f64,
    pub samples: usize,
}

/// Projects a 3D line, fits a circle to the image curve (algebraic fit plus
/// one geometric Gauss–Newton step) and reports the worst residual.
pub fn project_line_circle_fit(line: &Line3, model: &CameraModel, samples: usize) -> Result<LineCircleReport> {
    let d = line.direction.normalized()?;
    let n = line.point.cross(d);
    if n.norm() <= 1e-12 * line.point.norm().max(1.0) {
        bail!(Degenerate, "line passes through the projection centre");
    }
    let scale = line.point.norm().max(1.0);
    let pts: Vec<[f64; 2]> = (0..samples)
        .filter_map(|i| {
            let s = -0.95 * FRAC_PI_2 + 1.9 * FRAC_PI_2 * i as f64 / (samples.max(2) - 1) as f64;
            model.project(line.point + d * (scale * s.tan())).ok()
        })
        .collect();
    if pts.len() < 5 {
        bail!(Degenerate, "only {} projected samples fall in the model domain", pts.len());
    }
    if n.z.abs() <= 1e-12 * n.norm() {
        let [cx, cy] = model.principal_point();
        // radial line through the principal point, direction from the farthest sample
        let far = pts
            .iter()
            .copied()
            .max_by(|a, b| Float::hypot(a[0] - cx, a[1] - cy).total_cmp(&Float::hypot(b[0] - cx, b[1] - cy)))
            .unwrap_or([cx, cy]);
        let (ux, uy) = (far[0] - cx, far[1] - cy);
        let len = Float::hypot(ux, uy).max(1e-300);
        let max_residual = pts.iter().map(|p| ((p[0] - cx) * uy - (p[1] - cy) * ux).abs() / len).fold(0.0, f64::max);
        return Ok(LineCircleReport { fit: CurveFit::Straight, max_residual, samples: pts.len() });
    }
    let (center, radius) = fit_circle(&pts)?;
    let max_residual =
        pts.iter().map(|p| (Float::hypot(p[0] - center[0], p[1] - center[1]) - radius).abs()).fold(0.0, f64::max);
    Ok(LineCircleReport { fit: CurveFit::Circle { center, radius }, max_residual, samples: pts.len() })
}

/// Kåsa fit on centred, normalised points followed by one Gauss–Newton step
/// on geometric distances.
pub fn fit_circle(pts: &[[f64; 2]]) -> Result<([f64; 2], f64)> {
    if pts.len() < 3 {
        bail!(Degenerate, "circle fit needs 3 points");
    }
    let m = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p[0] / m, b + p[1] / m));
    let s = (pts.iter().map(|p| (p[0] - mx).powi(2) + (p[1] - my).powi(2)).sum::<f64>() / m).sqrt();
    if !(s > 0.0) {
        bail!(Degenerate, "coincident points");
    }
    let mut rows = Vec::with_capacity(pts.len() * 3);
    let mut rhs = Vec::with_capacity(pts.len());
    for p in pts {
        let (x, y) = ((p[0] - mx) / s, (p[1] - my) / s);
        rows.extend_from_slice(&[x, y, 1.0]);
        rhs.push(-(x * x + y * y));
    }
    let sol =
        linalg::least_squares(pts.len(), 3, &rows, &rhs).map_err(|_| Error::Degenerate("collinear points".into()))?;
    let (mut a, mut b) = (-0.5 * sol[0], -0.5 * sol[1]);
    let mut r = (a * a + b * b - sol[2]).sqrt();
    if !r.is_finite() {
        bail!(Degenerate, "no real circle through points");
    }
    // one Gauss–Newton step on d_i = |p_i − c| − r
    let mut jtj = [0.0; 9];
    let mut jtr = [0.0; 3];
    for p in pts {
        let (x, y) = ((p[0] - mx) / s, (p[1] - my) / s);
        let dist = Float::hypot(x - a, y - b);
        if dist == 0.0 {
            continue;
        }
        let j = [-(x - a) / dist, -(y - b) / dist, -1.0];
        let e = dist - r;
        for i in 0..3 {
            jtr[i] += j[i] * e;
            for k in 0..3 {
                jtj[i * 3 + k] += j[i] * j[k];
            }
        }
    }
    if let Ok(delta) = linalg::solve(3, &jtj, &jtr, 1e-15) {
        a -= delta[0];
        b -= delta[1];
        r -= delta[2];
    }
    Ok(([a * s + mx, b * s + my], r.abs() * s))
}
