//! Fisheye camera geometry and perception building blocks.
//!
//! The crate is `no_std` with `alloc`. Everything here is pure computation:
//! file formats, the command line and threading live in the `fpk` crate.

#![no_std]
#![forbid(unsafe_code)]
// NaN-rejecting comparisons like `!(x > 0.0)`
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod camera;
pub mod cgt;
pub mod error;
pub mod eval;
pub mod fitting;
pub mod geom;
pub mod lidar;
pub mod linalg;
pub mod losses;
pub mod map;
pub mod reps;
pub mod sampling;
pub mod synthesis;
pub mod weighting;

pub use camera::{CameraModel, Intrinsics, ModelKind, Projection};
pub use error::{Error, Result};
pub use geom::{Pose, Quaternion, Vec3};
pub use map::{Image, LabelMap, Map, Mask, ScalarMap};
