use std::path::PathBuf;

use clap::Args;
use fpk_core::lidar::{occlusion_correct, project_cloud, OcclusionConfig, PointCloud};
use serde_json::{json, Value};

use super::{Ctx, PoseArgs};
use crate::calib::CalibrationFile;
use crate::error::CliResult;
use crate::formats::{cloud, pfm};

#[derive(Debug, Clone, Args)]
pub struct LidarArgs {
    /// Point cloud: `x y z` text, or f32 triplets when the name ends in `.bin`.
    #[arg(long)]
    pub cloud: PathBuf,
    #[arg(long)]
    pub calib: PathBuf,
    /// LiDAR-to-camera extrinsic.
    #[command(flatten)]
    pub extrinsic: PoseArgs,
    #[arg(long, default_value_t = OcclusionConfig::default().slices)]
    pub slices: usize,
    /// Odd side length of the square dilation kernel.
    #[arg(long, default_value_t = OcclusionConfig::default().kernel)]
    pub kernel: usize,
    /// Skip occlusion correction.
    #[arg(long)]
    pub raw: bool,
}

/// Writes the sparse depth image to `--out` when given.
pub fn lidar(args: &LidarArgs, ctx: &Ctx) -> CliResult<Value> {
    let model = CalibrationFile::load(&args.calib)?.to_model()?;
    let pc = PointCloud::new(cloud::read_cloud(&args.cloud)?, args.extrinsic.pose()?)?;
    let proj = project_cloud(&pc, &model);
    let projected = proj.depth.data().iter().filter(|&&d| d > 0.0).count();
    let depth = if args.raw {
        proj.depth
    } else {
        occlusion_correct(&proj.depth, &OcclusionConfig { slices: args.slices, kernel: args.kernel })?
    };
    let kept = depth.data().iter().filter(|&&d| d > 0.0).count();
    if let Some(out) = &ctx.out {
        pfm::write_map(out, &depth)?;
    }
    Ok(json!({
        "points": pc.points().len(),
        "dropped": proj.dropped,
        "projected_pixels": projected,
        "removed": projected - kept,
        "kept": kept,
    }))
}
