//! Points, rotations and rigid transforms.

use core::ops::{Add, Mul, Neg, Sub};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(self.y * o.z - self.z * o.y, self.z * o.x - self.x * o.z, self.x * o.y - self.y * o.x)
    }

    pub fn norm(self) -> f64 {
        Float::sqrt(self.dot(self))
    }

    pub fn normalized(self) -> Result<Vec3> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(self * (1.0 / n))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Unit quaternion `w + xi + yj + zk`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    w: f64,
    x: f64,
    y: f64,
    z: f64,
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    /// Normalises the input; fails on a zero quaternion.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let n = Float::sqrt(w * w + x * x + y * y + z * z);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(Self { w: w / n, x: x / n, y: y / n, z: z / n })
    }

    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Result<Self> {
        let a = axis.normalized()?;
        let (s, c) = Float::sin_cos(angle * 0.5);
        Ok(Self { w: c, x: a.x * s, y: a.y * s, z: a.z * s })
    }

    /// Rotation about x, then y, then z (extrinsic axes), angles in radians.
    pub fn from_euler_xyz(rx: f64, ry: f64, rz: f64) -> Self {
        let qx = Self::from_axis_angle(Vec3::new(1.0, 0.0, 0.0), rx).unwrap_or(Self::IDENTITY);
        let qy = Self::from_axis_angle(Vec3::new(0.0, 1.0, 0.0), ry).unwrap_or(Self::IDENTITY);
        let qz = Self::from_axis_angle(Vec3::new(0.0, 0.0, 1.0), rz).unwrap_or(Self::IDENTITY);
        qz.mul(qy).mul(qx)
    }

    pub fn components(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn norm(&self) -> f64 {
        Float::sqrt(self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z)
    }

    pub fn conjugate(&self) -> Self {
        Self { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, o: Quaternion) -> Quaternion {
        let q = Quaternion {
            w: self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            x: self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            y: self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            z: self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        };
        // renormalise so that long chains stay on the unit sphere
        let n = q.norm();
        Quaternion { w: q.w / n, x: q.x / n, y: q.y / n, z: q.z / n }
    }

    pub fn rotate(&self, v: Vec3) -> Vec3 {
        let u = Vec3::new(self.x, self.y, self.z);
        let t = u.cross(v) * 2.0;
        v + t * self.w + u.cross(t)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0.0 && self.y == 0.0 && self.z == 0.0
    }
}

/// Rigid transform `p' = R p + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub rotation: Quaternion,
    pub translation: Vec3,
}

impl Default for Pose {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Pose {
    pub const IDENTITY: Pose = Pose { rotation: Quaternion::IDENTITY, translation: Vec3::ZERO };

    pub fn new(rotation: Quaternion, translation: Vec3) -> Self {
        Self { rotation, translation }
    }

    pub fn from_translation(t: Vec3) -> Self {
        Self { rotation: Quaternion::IDENTITY, translation: t }
    }

    pub fn apply(&self, p: Vec3) -> Vec3 {
        self.rotation.rotate(p) + self.translation
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Pose) -> Pose {
        Pose {
            rotation: self.rotation.mul(other.rotation),
            translation: self.rotation.rotate(other.translation) + self.translation,
        }
    }

    pub fn inverse(&self) -> Pose {
        let r = self.rotation.conjugate();
        Pose { rotation: r, translation: -r.rotate(self.translation) }
    }

    pub fn is_identity(&self) -> bool {
        self.rotation.is_identity() && self.translation == Vec3::ZERO
    }
}

/// Rescales a monocular pose so its translation matches the distance
/// travelled at the mean of the two speeds over `dt`.
pub fn scale_pose(pose: &Pose, speed_t: f64, speed_t1: f64, dt: f64) -> Result<Pose> {
    let n = pose.translation.norm();
    if n == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let travelled = 0.5 * (speed_t + speed_t1) * dt;
    if !(travelled > 0.0) || !travelled.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!("travelled distance must be positive, got {travelled}")));
    }
    Ok(Pose { rotation: pose.rotation, translation: pose.translation * (travelled / n) })
}
