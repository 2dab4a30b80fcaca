//! One function per subcommand. Each returns the JSON summary printed on
//! stdout; artefacts go under the global `--out` path.

mod camera;
mod eval;
mod lidar;
mod reps;
mod synth;
mod weights;

use std::path::{Path, PathBuf};

use clap::Args;
use fpk_core::{Pose, Quaternion, Vec3};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub use camera::{
    cgt, equiv, fit, project, unproject, CgtArgs, EquivArgs, EquivCheck, FitArgs, ProjectArgs, UnprojectArgs,
};
pub use eval::{eval_depth, eval_det, eval_seg, EvalDepthArgs, EvalDetArgs, EvalSegArgs, InterpolationArg};
pub use lidar::{lidar, LidarArgs};
pub use reps::{reps, RepsArgs};
pub use synth::{loss_eval, warp, LossEvalArgs, WarpArgs};
pub use weights::{weights, WeightsArgs};

/// Options shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct Ctx {
    pub out: Option<PathBuf>,
}

impl Ctx {
    pub fn out_path(&self, what: &str) -> CliResult<&Path> {
        self.out.as_deref().ok_or_else(|| CliError::Invalid(format!("--out is required to write {what}")))
    }
}

/// Comma-separated list of exactly `N` numbers.
pub fn parse_array<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let v = parse_list(s)?;
    v.try_into().map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| format!("'{t}' is not a number"))).collect()
}

pub fn parse_size(s: &str) -> Result<[usize; 2], String> {
    let parts: Vec<&str> = s.split([',', 'x']).collect();
    match parts.as_slice() {
        [w, h] => Ok([
            w.trim().parse().map_err(|_| format!("bad width '{w}'"))?,
            h.trim().parse().map_err(|_| format!("bad height '{h}'"))?,
        ]),
        _ => Err(format!("expected W,H, got '{s}'")),
    }
}

/// Rigid transform flags: quaternion `w,x,y,z` and translation `x,y,z`.
#[derive(Debug, Clone, Args)]
pub struct PoseArgs {
    /// Rotation quaternion w,x,y,z (normalised on read).
    #[arg(long, value_parser = parse_array::<4>, default_value = "1,0,0,0", allow_hyphen_values = true)]
    pub rotation: [f64; 4],
    #[arg(long, value_parser = parse_array::<3>, default_value = "0,0,0", allow_hyphen_values = true)]
    pub translation: [f64; 3],
}

impl PoseArgs {
    pub fn pose(&self) -> CliResult<Pose> {
        PoseRecord { rotation: self.rotation, translation: self.translation }.pose()
    }
}

fn identity_rotation() -> [f64; 4] {
    [1.0, 0.0, 0.0, 0.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoseRecord {
    #[serde(default = "identity_rotation")]
    pub rotation: [f64; 4],
    pub translation: [f64; 3],
}

impl PoseRecord {
    pub fn pose(&self) -> CliResult<Pose> {
        let [w, x, y, z] = self.rotation;
        let [tx, ty, tz] = self.translation;
        Ok(Pose::new(Quaternion::new(w, x, y, z)?, Vec3::new(tx, ty, tz)))
    }
}

pub fn read_poses(path: &Path) -> CliResult<Vec<Pose>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let recs: Vec<PoseRecord> = serde_json::from_str(&text).map_err(|e| CliError::format(path, e.to_string()))?;
    recs.iter().map(PoseRecord::pose).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_parsers() {
        assert_eq!(parse_array::<3>("0, -1.5,2e3").unwrap(), [0.0, -1.5, 2000.0]);
        assert!(parse_array::<3>("1,2").is_err());
        assert!(parse_array::<2>("1,a").is_err());
        assert_eq!(parse_size("640x480").unwrap(), [640, 480]);
        assert_eq!(parse_size("64,48").unwrap(), [64, 48]);
        assert!(parse_size("64").is_err());
    }
}
