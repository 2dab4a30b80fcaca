//! Radially symmetric camera models.
//!
//! Every model maps a field angle `θ` (angle between the ray and the optical
//! axis) to an image radius `r(θ)`. Principal point, aspect and sensor size
//! are shared by all models; the pinhole model additionally carries
//! Brown–Conrady distortion.

pub mod lut;
pub mod rectify;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{bail, Error, Result};
use crate::geom::Vec3;

/// Margin kept below numerically located domain limits.
const LIMIT_MARGIN: f64 = 1e-6;
/// Samples used when checking that `r(θ)` is strictly increasing.
const MONOTONE_SAMPLES: usize = 2048;
/// Default half field of view for the polynomial model, in radians.
pub const POLYNOMIAL_DEFAULT_THETA_MAX: f64 = 1.92;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Pinhole,
    Equidistant,
    Stereographic,
    Orthographic,
    ExtOrthographic,
    Polynomial4,
    Division,
    Fov,
    Ucm,
    Eucm,
    DoubleSphere,
}

impl ModelKind {
    pub const ALL: [ModelKind; 11] = [
        ModelKind::Pinhole,
        ModelKind::Equidistant,
        ModelKind::Stereographic,
        ModelKind::Orthographic,
        ModelKind::ExtOrthographic,
        ModelKind::Polynomial4,
        ModelKind::Division,
        ModelKind::Fov,
        ModelKind::Ucm,
        ModelKind::Eucm,
        ModelKind::DoubleSphere,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Pinhole => "pinhole",
            ModelKind::Equidistant => "equidistant",
            ModelKind::Stereographic => "stereographic",
            ModelKind::Orthographic => "orthographic",
            ModelKind::ExtOrthographic => "ext_orthographic",
            ModelKind::Polynomial4 => "polynomial4",
            ModelKind::Division => "division",
            ModelKind::Fov => "fov",
            ModelKind::Ucm => "ucm",
            ModelKind::Eucm => "eucm",
            ModelKind::DoubleSphere => "double_sphere",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Parameter names in the order used by [`Projection::params`].
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            ModelKind::Pinhole => &["fx", "fy", "k1", "k2", "k3", "p1", "p2"],
            ModelKind::Equidistant | ModelKind::Stereographic | ModelKind::Orthographic => &["f"],
            ModelKind::ExtOrthographic => &["f", "lambda"],
            ModelKind::Polynomial4 => &["k1", "k2", "k3", "k4"],
            ModelKind::Division => &["a", "f"],
            ModelKind::Fov => &["omega", "f"],
            ModelKind::Ucm => &["gamma", "xi"],
            ModelKind::Eucm => &["f", "alpha", "beta"],
            ModelKind::DoubleSphere => &["f", "xi", "alpha"],
        }
    }
}

impl core::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Model family and its lens parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Projection {
    Pinhole {
        fx: f64,
        fy: f64,
        k1: f64,
        k2: f64,
        k3: f64,
        p1: f64,
        p2: f64,
    },
    Equidistant {
        f: f64,
    },
    Stereographic {
        f: f64,
    },
    Orthographic {
        f: f64,
    },
    ExtOrthographic {
        f: f64,
        lambda: f64,
    },
    /// `r = k1 θ + k2 θ² + k3 θ³ + k4 θ⁴`
    Polynomial4 {
        k: [f64; 4],
    },
    /// Single-parameter division undistortion `r_u = r_d / (1 - a r_d²)` with
    /// `r_u = f tan θ`.
    Division {
        a: f64,
        f: f64,
    },
    Fov {
        omega: f64,
        f: f64,
    },
    Ucm {
        gamma: f64,
        xi: f64,
    },
    Eucm {
        f: f64,
        alpha: f64,
        beta: f64,
    },
    DoubleSphere {
        f: f64,
        xi: f64,
        alpha: f64,
    },
}

impl Projection {
    pub fn pinhole(f: f64) -> Self {
        Projection::Pinhole { fx: f, fy: f, k1: 0.0, k2: 0.0, k3: 0.0, p1: 0.0, p2: 0.0 }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            Projection::Pinhole { .. } => ModelKind::Pinhole,
            Projection::Equidistant { .. } => ModelKind::Equidistant,
            Projection::Stereographic { .. } => ModelKind::Stereographic,
            Projection::Orthographic { .. } => ModelKind::Orthographic,
            Projection::ExtOrthographic { .. } => ModelKind::ExtOrthographic,
            Projection::Polynomial4 { .. } => ModelKind::Polynomial4,
            Projection::Division { .. } => ModelKind::Division,
            Projection::Fov { .. } => ModelKind::Fov,
            Projection::Ucm { .. } => ModelKind::Ucm,
            Projection::Eucm { .. } => ModelKind::Eucm,
            Projection::DoubleSphere { .. } => ModelKind::DoubleSphere,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Projection::Pinhole { fx, fy, k1, k2, k3, p1, p2 } => vec![fx, fy, k1, k2, k3, p1, p2],
            Projection::Equidistant { f } | Projection::Stereographic { f } | Projection::Orthographic { f } => vec![f],
            Projection::ExtOrthographic { f, lambda } => vec![f, lambda],
            Projection::Polynomial4 { k } => k.to_vec(),
            Projection::Division { a, f } => vec![a, f],
            Projection::Fov { omega, f } => vec![omega, f],
            Projection::Ucm { gamma, xi } => vec![gamma, xi],
            Projection::Eucm { f, alpha, beta } => vec![f, alpha, beta],
            Projection::DoubleSphere { f, xi, alpha } => vec![f, xi, alpha],
        }
    }

    pub fn from_params(kind: ModelKind, p: &[f64]) -> Result<Self> {
        let n = kind.param_names().len();
        if p.len() != n {
            bail!(InvalidParameter, "{kind} takes {n} parameters, got {}", p.len());
        }
        Ok(match kind {
            ModelKind::Pinhole => {
                Projection::Pinhole { fx: p[0], fy: p[1], k1: p[2], k2: p[3], k3: p[4], p1: p[5], p2: p[6] }
            }
            ModelKind::Equidistant => Projection::Equidistant { f: p[0] },
            ModelKind::Stereographic => Projection::Stereographic { f: p[0] },
            ModelKind::Orthographic => Projection::Orthographic { f: p[0] },
            ModelKind::ExtOrthographic => Projection::ExtOrthographic { f: p[0], lambda: p[1] },
            ModelKind::Polynomial4 => Projection::Polynomial4 { k: [p[0], p[1], p[2], p[3]] },
            ModelKind::Division => Projection::Division { a: p[0], f: p[1] },
            ModelKind::Fov => Projection::Fov { omega: p[0], f: p[1] },
            ModelKind::Ucm => Projection::Ucm { gamma: p[0], xi: p[1] },
            ModelKind::Eucm => Projection::Eucm { f: p[0], alpha: p[1], beta: p[2] },
            ModelKind::DoubleSphere => Projection::DoubleSphere { f: p[0], xi: p[1], alpha: p[2] },
        })
    }

    /// Raw radial function. May return NaN or ±∞ outside the model domain.
    pub fn radial(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        match *self {
            Projection::Pinhole { fx, k1, k2, k3, .. } => {
                let t = theta.tan();
                let t2 = t * t;
                fx * t * (1.0 + t2 * (k1 + t2 * (k2 + t2 * k3)))
            }
            Projection::Equidistant { f } => f * theta,
            Projection::Stereographic { f } => 2.0 * f * (0.5 * theta).tan(),
            Projection::Orthographic { f } | Projection::ExtOrthographic { f, .. } => f * s,
            Projection::Polynomial4 { k } => theta * (k[0] + theta * (k[1] + theta * (k[2] + theta * k[3]))),
            Projection::Division { a, f } => {
                let b = 4.0 * a * f * f;
                2.0 * f * s / (c + (c * c + b * s * s).sqrt())
            }
            Projection::Fov { omega, f } => (f / omega) * Float::atan2(2.0 * (0.5 * omega).tan() * s, c),
            Projection::Ucm { gamma, xi } => {
                if xi >= 0.5 {
                    // cos θ + ξ cancels near the pole; use the half-angle form
                    let (sh, ch) = (0.5 * theta).sin_cos();
                    gamma * 2.0 * sh * ch / ((xi - 1.0) + 2.0 * ch * ch)
                } else {
                    gamma * s / (c + xi)
                }
            }
            Projection::Eucm { f, alpha, beta } => {
                let d = (beta * s * s + c * c).sqrt();
                f * s / (alpha * d + (1.0 - alpha) * c)
            }
            Projection::DoubleSphere { f, xi, alpha } => {
                let zc = xi + c;
                let d2 = (s * s + zc * zc).sqrt();
                f * s / (alpha * d2 + (1.0 - alpha) * zc)
            }
        }
    }

    /// dr/dθ; analytic where cheap, central differences otherwise.
    pub fn radial_slope(&self, theta: f64) -> f64 {
        match *self {
            Projection::Equidistant { f } => f,
            Projection::Polynomial4 { k } => k[0] + theta * (2.0 * k[1] + theta * (3.0 * k[2] + theta * 4.0 * k[3])),
            Projection::Orthographic { f } | Projection::ExtOrthographic { f, .. } => f * theta.cos(),
            _ => {
                let h = 1e-7 * theta.abs().max(1.0);
                (self.radial(theta + h) - self.radial(theta - h)) / (2.0 * h)
            }
        }
    }

    /// Closed-form inverse where one exists.
    fn radial_inverse_closed(&self, r: f64) -> Option<f64> {
        Some(match *self {
            Projection::Pinhole { fx, k1, k2, k3, .. } => {
                if k1 != 0.0 || k2 != 0.0 || k3 != 0.0 {
                    return None;
                }
                (r / fx).atan()
            }
            Projection::Equidistant { f } => r / f,
            Projection::Stereographic { f } => 2.0 * (r / (2.0 * f)).atan(),
            Projection::Orthographic { f } | Projection::ExtOrthographic { f, .. } => (r / f).min(1.0).asin(),
            Projection::Polynomial4 { .. } => return None,
            Projection::Division { a, f } => Float::atan2(r, f * (1.0 - a * r * r)),
            Projection::Fov { omega, f } => {
                let psi = r * omega / f;
                Float::atan2(psi.sin(), 2.0 * (0.5 * omega).tan() * psi.cos())
            }
            Projection::Ucm { gamma, xi } => {
                let m = r / gamma;
                let disc = 1.0 + (1.0 - xi * xi) * m * m;
                let k = (xi + disc.max(0.0).sqrt()) / (1.0 + m * m);
                Float::atan2(k * m, k - xi)
            }
            Projection::Eucm { f, alpha, beta } => {
                let m = r / f;
                let disc = 1.0 - (2.0 * alpha - 1.0) * beta * m * m;
                let mz = (1.0 - beta * alpha * alpha * m * m) / (alpha * disc.max(0.0).sqrt() + 1.0 - alpha);
                Float::atan2(m, mz)
            }
            Projection::DoubleSphere { f, xi, alpha } => {
                let m = r / f;
                let m2 = m * m;
                let disc = 1.0 - (2.0 * alpha - 1.0) * m2;
                let mz = (1.0 - alpha * alpha * m2) / (alpha * disc.max(0.0).sqrt() + 1.0 - alpha);
                let k = (mz * xi + (mz * mz + (1.0 - xi * xi) * m2).max(0.0).sqrt()) / (mz * mz + m2);
                Float::atan2(k * m, k * mz - xi)
            }
        })
    }

    fn validate(&self) -> Result<()> {
        let params = self.params();
        if params.iter().any(|p| !p.is_finite()) {
            bail!(InvalidParameter, "{} parameters must be finite", self.kind());
        }
        let positive = |name: &str, v: f64| -> Result<()> {
            if v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(alloc::format!("{name} must be positive, got {v}")))
            }
        };
        match *self {
            Projection::Pinhole { fx, fy, .. } => {
                positive("fx", fx)?;
                positive("fy", fy)?;
            }
            Projection::Equidistant { f }
            | Projection::Stereographic { f }
            | Projection::Orthographic { f }
            | Projection::ExtOrthographic { f, .. }
            | Projection::Division { f, .. } => positive("f", f)?,
            Projection::Polynomial4 { .. } => {}
            Projection::Fov { omega, f } => {
                positive("f", f)?;
                if !(omega > 0.0 && omega < PI) {
                    bail!(InvalidParameter, "omega must lie in (0, pi), got {omega}");
                }
            }
            Projection::Ucm { gamma, xi } => {
                positive("gamma", gamma)?;
                if xi < 0.0 {
                    bail!(InvalidParameter, "xi must be non-negative, got {xi}");
                }
            }
            Projection::Eucm { f, alpha, beta } => {
                positive("f", f)?;
                positive("beta", beta)?;
                if !(0.0..=1.0).contains(&alpha) {
                    bail!(InvalidParameter, "alpha must lie in [0, 1], got {alpha}");
                }
            }
            Projection::DoubleSphere { f, xi, alpha } => {
                positive("f", f)?;
                if !(0.0..=1.0).contains(&alpha) {
                    bail!(InvalidParameter, "alpha must lie in [0, 1], got {alpha}");
                }
                if !(xi > -1.0 && xi <= 1.0) {
                    bail!(InvalidParameter, "xi must lie in (-1, 1], got {xi}");
                }
            }
        }
        Ok(())
    }

    /// Largest field angle for which the model is defined and monotone.
    pub fn natural_theta_limit(&self) -> f64 {
        match *self {
            Projection::Pinhole { .. } => self.scan_limit(FRAC_PI_2),
            Projection::Equidistant { .. } | Projection::Stereographic { .. } => PI,
            Projection::Orthographic { .. } | Projection::ExtOrthographic { .. } => FRAC_PI_2,
            Projection::Polynomial4 { .. } => POLYNOMIAL_DEFAULT_THETA_MAX,
            Projection::Division { a, .. } => {
                if a > 0.0 {
                    PI
                } else {
                    self.scan_limit(PI)
                }
            }
            Projection::Fov { .. } => PI,
            Projection::Ucm { xi, .. } => {
                if xi == 0.0 {
                    FRAC_PI_2
                } else {
                    (-(xi.min(1.0 / xi))).acos()
                }
            }
            Projection::Eucm { .. } | Projection::DoubleSphere { .. } => self.scan_limit(PI),
        }
    }

    fn locally_valid(&self, theta: f64) -> bool {
        let r = self.radial(theta);
        r.is_finite() && r > 0.0 && self.radial_slope(theta) > 0.0
    }

    /// Scans (0, upper] for the first angle where `r` stops being finite,
    /// positive and increasing, then bisects the boundary.
    fn scan_limit(&self, upper: f64) -> f64 {
        const N: usize = 4096;
        let mut prev = 0.0;
        for i in 1..=N {
            let t = upper * i as f64 / N as f64;
            let ok = self.locally_valid(t) && self.radial(t) > self.radial(prev);
            if !ok {
                let (mut lo, mut hi) = (prev, t);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if self.locally_valid(mid) && self.radial(mid) > self.radial(lo) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return (lo - LIMIT_MARGIN).max(0.0);
            }
            prev = t;
        }
        upper
    }
}

/// Principal point, pixel aspect and sensor size shared by every model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intrinsics {
    pub principal_point: [f64; 2],
    pub aspect: [f64; 2],
    /// Sensor size `(width, height)` in pixels.
    pub size: [usize; 2],
}

impl Intrinsics {
    pub fn new(principal_point: [f64; 2], size: [usize; 2]) -> Self {
        Self { principal_point, aspect: [1.0, 1.0], size }
    }

    /// Principal point at the geometric centre of the sensor.
    pub fn centered(size: [usize; 2]) -> Self {
        Self::new([(size[0] as f64 - 1.0) * 0.5, (size[1] as f64 - 1.0) * 0.5], size)
    }

    fn validate(&self) -> Result<()> {
        if !(self.aspect[0] > 0.0 && self.aspect[1] > 0.0) || !self.aspect[0].is_finite() || !self.aspect[1].is_finite()
        {
            bail!(InvalidParameter, "aspect must be positive, got {:?}", self.aspect);
        }
        if !self.principal_point[0].is_finite() || !self.principal_point[1].is_finite() {
            bail!(InvalidParameter, "principal point must be finite");
        }
        Ok(())
    }
}

/// A validated camera: projection family, intrinsics and field-angle domain.
#[derive(Debug, Clone, PartialEq)]
pub struct CameraModel {
    projection: Projection,
    intrinsics: Intrinsics,
    theta_max: f64,
    r_max: f64,
}

impl CameraModel {
    /// Builds a model on its natural field-angle domain.
    pub fn new(projection: Projection, intrinsics: Intrinsics) -> Result<Self> {
        projection.validate()?;
        let limit = projection.natural_theta_limit();
        Self::build(projection, intrinsics, limit)
    }

    /// Builds a model with an explicit half field of view. Only the
    /// polynomial model may extend past its default limit.
    pub fn with_theta_max(projection: Projection, intrinsics: Intrinsics, theta_max: f64) -> Result<Self> {
        projection.validate()?;
        let limit = match projection {
            Projection::Polynomial4 { .. } => PI,
            _ => projection.natural_theta_limit(),
        };
        if !(theta_max > 0.0 && theta_max <= limit) {
            bail!(InvalidParameter, "theta_max {theta_max} outside (0, {limit}] for {}", projection.kind());
        }
        Self::build(projection, intrinsics, theta_max)
    }

    fn build(projection: Projection, intrinsics: Intrinsics, theta_max: f64) -> Result<Self> {
        intrinsics.validate()?;
        let mut prev = 0.0;
        for i in 1..MONOTONE_SAMPLES {
            let t = theta_max * i as f64 / MONOTONE_SAMPLES as f64;
            let r = projection.radial(t);
            if !(r.is_finite() && r > prev) {
                bail!(
                    InvalidParameter,
                    "{} radial function is not increasing on [0, {theta_max}] (at theta={t})",
                    projection.kind()
                );
            }
            prev = r;
        }
        // A pole at the limit evaluates to a huge, infinite or wrong-signed value.
        let end = projection.radial(theta_max);
        let r_max = if end.is_finite() && end >= prev && end < prev * 1e6 { end } else { f64::INFINITY };
        Ok(Self { projection, intrinsics, theta_max, r_max })
    }

    pub fn projection(&self) -> &Projection {
        &self.projection
    }

    pub fn kind(&self) -> ModelKind {
        self.projection.kind()
    }

    pub fn intrinsics(&self) -> &Intrinsics {
        &self.intrinsics
    }

    pub fn principal_point(&self) -> [f64; 2] {
        self.intrinsics.principal_point
    }

    pub fn size(&self) -> [usize; 2] {
        self.intrinsics.size
    }

    pub fn theta_max(&self) -> f64 {
        self.theta_max
    }

    /// Image radius at `theta_max`; infinite when the model has a pole there.
    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn with_intrinsics(&self, intrinsics: Intrinsics) -> Result<Self> {
        intrinsics.validate()?;
        Ok(Self { intrinsics, ..self.clone() })
    }

    pub fn in_domain(&self, theta: f64) -> bool {
        theta >= 0.0 && (theta < self.theta_max || (theta == self.theta_max && self.r_max.is_finite()))
    }

    pub fn radial_forward(&self, theta: f64) -> Result<f64> {
        if !self.in_domain(theta) {
            return Err(Error::FieldAngle { theta, max: self.theta_max });
        }
        Ok(self.projection.radial(theta))
    }

    pub fn radial_inverse(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0 && r <= self.r_max) {
            return Err(Error::Radius { radius: r, max: self.r_max });
        }
        if r == 0.0 {
            return Ok(0.0);
        }
        let theta = match self.projection.radial_inverse_closed(r) {
            Some(t) => t,
            None => {
                let hi = if self.r_max.is_finite() { self.theta_max } else { self.theta_max * (1.0 - 1e-12) };
                solve_increasing(|t| self.projection.radial(t), |t| self.projection.radial_slope(t), r, 0.0, hi)
            }
        };
        Ok(theta.clamp(0.0, self.theta_max))
    }

    /// Pixel coordinates of a camera-frame point.
    pub fn project(&self, p: Vec3) -> Result<[f64; 2]> {
        if !p.is_finite() {
            return Err(Error::InvalidParameter("point must be finite".into()));
        }
        if p.norm() == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let [cx, cy] = self.intrinsics.principal_point;
        let [ax, ay] = self.intrinsics.aspect;
        let rho = Float::hypot(p.x, p.y);
        let theta = Float::atan2(rho, p.z);
        if !self.in_domain(theta) {
            return Err(Error::FieldAngle { theta, max: self.theta_max });
        }
        if let Projection::Pinhole { fx, fy, k1, k2, k3, p1, p2 } = self.projection {
            let (x, y) = (p.x / p.z, p.y / p.z);
            let (xd, yd) = brown_conrady(x, y, k1, k2, k3, p1, p2);
            return Ok([fx * xd * ax + cx, fy * yd * ay + cy]);
        }
        if rho == 0.0 {
            if p.z > 0.0 {
                return Ok([cx, cy]);
            }
            return Err(Error::FieldAngle { theta, max: self.theta_max });
        }
        let r = self.projection.radial(theta);
        Ok([r * (p.x / rho) * ax + cx, r * (p.y / rho) * ay + cy])
    }

    /// Ray through a pixel, unit length unless a distance is given.
    /// Sensor bounds are not enforced, only the radius domain.
    pub fn unproject(&self, pixel: [f64; 2], distance: Option<f64>) -> Result<Vec3> {
        let [cx, cy] = self.intrinsics.principal_point;
        let [ax, ay] = self.intrinsics.aspect;
        let xi = (pixel[0] - cx) / ax;
        let yi = (pixel[1] - cy) / ay;
        if !xi.is_finite() || !yi.is_finite() {
            return Err(Error::InvalidParameter("pixel must be finite".into()));
        }
        let dir = if let Projection::Pinhole { fx, fy, k1, k2, k3, p1, p2 } = self.projection {
            let (x, y) = undistort_brown_conrady(xi / fx, yi / fy, k1, k2, k3, p1, p2)?;
            let d = Vec3::new(x, y, 1.0).normalized()?;
            let theta = Float::atan2(Float::hypot(d.x, d.y), d.z);
            if !self.in_domain(theta) {
                return Err(Error::Radius { radius: Float::hypot(xi, yi), max: self.r_max });
            }
            d
        } else {
            let r = Float::hypot(xi, yi);
            let theta = self.radial_inverse(r)?;
            if r == 0.0 {
                Vec3::new(0.0, 0.0, 1.0)
            } else {
                let (s, c) = theta.sin_cos();
                Vec3::new(s * xi / r, s * yi / r, c)
            }
        };
        match distance {
            None => Ok(dir),
            Some(d) if d > 0.0 && d.is_finite() => Ok(dir * d),
            Some(d) => Err(Error::InvalidParameter(alloc::format!("distance must be positive, got {d}"))),
        }
    }

    /// Field angle of the ray through a pixel.
    pub fn pixel_theta(&self, pixel: [f64; 2]) -> Result<f64> {
        let d = self.unproject(pixel, None)?;
        Ok(Float::atan2(Float::hypot(d.x, d.y), d.z))
    }

    pub fn describe(&self) -> String {
        alloc::format!("{} {:?} theta_max={}", self.kind(), self.projection.params(), self.theta_max)
    }
}

fn brown_conrady(x: f64, y: f64, k1: f64, k2: f64, k3: f64, p1: f64, p2: f64) -> (f64, f64) {
    let r2 = x * x + y * y;
    let radial = 1.0 + r2 * (k1 + r2 * (k2 + r2 * k3));
    (x * radial + 2.0 * p1 * x * y + p2 * (r2 + 2.0 * x * x), y * radial + p1 * (r2 + 2.0 * y * y) + 2.0 * p2 * x * y)
}

fn undistort_brown_conrady(xd: f64, yd: f64, k1: f64, k2: f64, k3: f64, p1: f64, p2: f64) -> Result<(f64, f64)> {
    if k1 == 0.0 && k2 == 0.0 && k3 == 0.0 && p1 == 0.0 && p2 == 0.0 {
        return Ok((xd, yd));
    }
    let (mut x, mut y) = (xd, yd);
    for _ in 0..100 {
        let (fx, fy) = brown_conrady(x, y, k1, k2, k3, p1, p2);
        let (ex, ey) = (fx - xd, fy - yd);
        if ex.abs() < 1e-16 && ey.abs() < 1e-16 {
            return Ok((x, y));
        }
        let h = 1e-8 * (1.0 + x.abs().max(y.abs()));
        let (fxx, fyx) = brown_conrady(x + h, y, k1, k2, k3, p1, p2);
        let (fxy, fyy) = brown_conrady(x, y + h, k1, k2, k3, p1, p2);
        let (j00, j10, j01, j11) = ((fxx - fx) / h, (fyx - fy) / h, (fxy - fx) / h, (fyy - fy) / h);
        let det = j00 * j11 - j01 * j10;
        if det.abs() < 1e-300 {
            break;
        }
        let dx = (j11 * ex - j01 * ey) / det;
        let dy = (-j10 * ex + j00 * ey) / det;
        x -= dx;
        y -= dy;
        if dx.abs() < 1e-16 * (1.0 + x.abs()) && dy.abs() < 1e-16 * (1.0 + y.abs()) {
            return Ok((x, y));
        }
    }
    let (fx, fy) = brown_conrady(x, y, k1, k2, k3, p1, p2);
    let tol = 1e-12 * (1.0 + xd.abs().max(yd.abs()));
    if (fx - xd).abs() < tol && (fy - yd).abs() < tol {
        Ok((x, y))
    } else {
        Err(Error::NoConvergence("Brown-Conrady undistortion".into()))
    }
}

/// Solves `f(t) = target` for increasing `f` on `[lo, hi]`: bisection to a
/// tight bracket, then Newton steps that stay inside it.
pub(crate) fn solve_increasing(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    target: f64,
    mut lo: f64,
    mut hi: f64,
) -> f64 {
    for _ in 0..200 {
        if hi - lo <= 1e-12 * hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let v = f(mid);
        if v < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..4 {
        let e = f(t) - target;
        let d = df(t);
        if e == 0.0 || !(d > 0.0) {
            break;
        }
        let next = t - e / d;
        if !(next >= lo && next <= hi) {
            break;
        }
        t = next;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    pub(crate) fn all_models() -> Vec<CameraModel> {
        let intr = Intrinsics::new([640.0, 480.0], [1280, 960]);
        let projections = [
            Projection::Pinhole { fx: 400.0, fy: 410.0, k1: -0.05, k2: 0.01, k3: 0.0, p1: 1e-4, p2: -2e-4 },
            Projection::Equidistant { f: 300.0 },
            Projection::Stereographic { f: 250.0 },
            Projection::Orthographic { f: 400.0 },
            Projection::ExtOrthographic { f: 400.0, lambda: 0.5 },
            Projection::Polynomial4 { k: [339.749, -31.988, 48.275, -7.201] },
            Projection::Division { a: 1e-6, f: 300.0 },
            Projection::Fov { omega: 1.2, f: 300.0 },
            Projection::Ucm { gamma: 600.0, xi: 0.9 },
            Projection::Eucm { f: 300.0, alpha: 0.6, beta: 1.1 },
            Projection::DoubleSphere { f: 300.0, xi: -0.2, alpha: 0.57 },
        ];
        projections.into_iter().map(|p| CameraModel::new(p, intr).unwrap()).collect()
    }

    #[test]
    fn equidistant_projects_known_point() {
        let m = CameraModel::new(Projection::Equidistant { f: 2.0 }, Intrinsics::new([0.0, 0.0], [10, 10])).unwrap();
        let p = m.project(Vec3::new(1.0, 0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(p[0], core::f64::consts::FRAC_PI_2, epsilon = 1e-12);
        assert_abs_diff_eq!(p[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn pinhole_on_axis_hits_principal_point() {
        let m = CameraModel::new(Projection::pinhole(500.0), Intrinsics::new([320.0, 240.0], [640, 480])).unwrap();
        assert_eq!(m.project(Vec3::new(0.0, 0.0, 5.0)).unwrap(), [320.0, 240.0]);
        assert!(matches!(m.project(Vec3::new(0.0, 0.0, -1.0)), Err(Error::FieldAngle { .. })));
    }

    #[test]
    fn stereographic_at_right_angle() {
        let m = CameraModel::new(Projection::Stereographic { f: 1.0 }, Intrinsics::centered([4, 4])).unwrap();
        assert_abs_diff_eq!(m.radial_forward(FRAC_PI_2).unwrap(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn polynomial_inverse_recovers_angle() {
        let m = CameraModel::new(
            Projection::Polynomial4 { k: [500.0, -10.0, 1.0, -0.05] },
            Intrinsics::centered([1000, 1000]),
        )
        .unwrap();
        let r = m.radial_forward(0.8).unwrap();
        assert_abs_diff_eq!(m.radial_inverse(r).unwrap(), 0.8, epsilon = 1e-9);
    }

    #[test]
    fn out_of_domain_angle_is_rejected() {
        let m = CameraModel::new(Projection::Orthographic { f: 1.0 }, Intrinsics::centered([4, 4])).unwrap();
        assert!(m.radial_forward(FRAC_PI_2 + 0.1).is_err());
        assert!(m.radial_inverse(1.5).is_err());
        assert!(m.radial_forward(-0.1).is_err());
    }

    #[test]
    fn zero_norm_point_is_rejected() {
        for m in all_models() {
            assert_eq!(m.project(Vec3::ZERO), Err(Error::ZeroNorm));
        }
    }

    #[test]
    fn radial_inverse_matches_forward_for_every_model() {
        for m in all_models() {
            for i in 1..200 {
                let t = m.theta_max() * i as f64 / 200.0;
                let r = m.radial_forward(t).unwrap();
                let back = m.radial_inverse(r).unwrap();
                let r2 = m.projection().radial(back);
                assert!((r2 - r).abs() <= 1e-9 * r.max(1.0), "{} theta={t}: {r} vs {r2}", m.kind());
            }
        }
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        let intr = Intrinsics::centered([10, 10]);
        assert!(CameraModel::new(Projection::Fov { omega: 4.0, f: 1.0 }, intr).is_err());
        assert!(CameraModel::new(Projection::Equidistant { f: -1.0 }, intr).is_err());
        assert!(CameraModel::new(Projection::Polynomial4 { k: [1.0, -5.0, 0.0, 0.0] }, intr).is_err());
        assert!(CameraModel::new(Projection::Eucm { f: 1.0, alpha: 1.5, beta: 1.0 }, intr).is_err());
        assert!(CameraModel::new(Projection::DoubleSphere { f: 1.0, xi: -1.0, alpha: 0.5 }, intr).is_err());
    }

    #[test]
    fn ucm_domain_limits() {
        let intr = Intrinsics::centered([10, 10]);
        let m = CameraModel::new(Projection::Ucm { gamma: 1.0, xi: 0.5 }, intr).unwrap();
        assert_abs_diff_eq!(m.theta_max(), (-0.5f64).acos(), epsilon = 1e-15);
        let m = CameraModel::new(Projection::Ucm { gamma: 1.0, xi: 2.0 }, intr).unwrap();
        assert_abs_diff_eq!(m.theta_max(), (-0.5f64).acos(), epsilon = 1e-15);
        assert!(m.r_max().is_finite());
    }

    #[test]
    fn names_round_trip() {
        for k in ModelKind::ALL {
            assert_eq!(ModelKind::from_name(k.name()), Some(k));
            let p = vec![1.0; k.param_names().len()];
            assert_eq!(Projection::from_params(k, &p).unwrap().kind(), k);
        }
    }
}
