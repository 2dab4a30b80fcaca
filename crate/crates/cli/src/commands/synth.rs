use std::path::PathBuf;

use clap::Args;
use fpk_core::losses::{csdc_loss, photometric_loss, smoothness_loss, PhotometricConfig, RobustLossParams};
use fpk_core::synthesis::{warp_image, warp_labels};
use fpk_core::Mask;
use serde_json::{json, Value};

use super::{read_poses, Ctx, PoseArgs};
use crate::calib::CalibrationFile;
use crate::error::{CliError, CliResult};
use crate::formats::{pfm, png_io};

#[derive(Debug, Clone, Args)]
pub struct WarpArgs {
    #[arg(long)]
    pub calib: PathBuf,
    /// Source frame PNG.
    #[arg(long)]
    pub source: PathBuf,
    /// Target-frame distance map (PFM).
    #[arg(long)]
    pub distance: PathBuf,
    #[command(flatten)]
    pub pose: PoseArgs,
    /// Treat the source as a label map and sample it by nearest neighbour.
    #[arg(long)]
    pub labels: bool,
    /// Where to write the ego mask PNG.
    #[arg(long)]
    pub mask_out: Option<PathBuf>,
}

/// Writes the warped frame to `--out` when given.
pub fn warp(args: &WarpArgs, ctx: &Ctx) -> CliResult<Value> {
    let model = CalibrationFile::load(&args.calib)?.to_model()?;
    let distance = pfm::read_map(&args.distance)?;
    let pose = args.pose.pose()?;
    let mask = if args.labels {
        let (labels, mask) = warp_labels(&png_io::read_labels(&args.source)?, &distance, &pose, &model)?;
        if let Some(out) = &ctx.out {
            png_io::write_labels(out, &labels)?;
        }
        mask
    } else {
        let r = warp_image(&png_io::read_image(&args.source)?, &distance, &pose, &model)?;
        if let Some(out) = &ctx.out {
            png_io::write_image(out, &r.image)?;
        }
        r.mask
    };
    if let Some(p) = &args.mask_out {
        png_io::write_mask(p, &mask)?;
    }
    Ok(json!({"width": mask.width(), "height": mask.height(), "valid_pixels": mask.count()}))
}

#[derive(Debug, Clone, Args)]
pub struct LossEvalArgs {
    /// Target frame PNG.
    #[arg(long)]
    pub target: PathBuf,
    /// Reconstructed frame PNG; repeat for several.
    #[arg(long = "recon")]
    pub recons: Vec<PathBuf>,
    /// Validity mask PNG, one per reconstruction.
    #[arg(long = "mask")]
    pub masks: Vec<PathBuf>,
    #[arg(long, default_value_t = PhotometricConfig::default().alpha)]
    pub alpha: f64,
    #[arg(long, default_value_t = PhotometricConfig::default().clip_percentile)]
    pub clip_percentile: f64,
    /// Robust loss shape.
    #[arg(long, default_value_t = RobustLossParams::default().rho)]
    pub rho: f64,
    /// Robust loss scale.
    #[arg(long, default_value_t = RobustLossParams::default().scale)]
    pub scale: f64,
    /// Target distance map (PFM) for the edge-aware smoothness term.
    #[arg(long)]
    pub distance: Option<PathBuf>,
    /// Distance maps (PFM) of a sequence for the cross-sequence consistency term.
    #[arg(long = "frame")]
    pub frames: Vec<PathBuf>,
    /// JSON array of camera-to-world poses, one per frame.
    #[arg(long)]
    pub poses: Option<PathBuf>,
    /// Camera for the consistency term.
    #[arg(long)]
    pub calib: Option<PathBuf>,
}

/// Writes the clipped per-pixel photometric map to `--out` when given.
pub fn loss_eval(args: &LossEvalArgs, ctx: &Ctx) -> CliResult<Value> {
    let target = png_io::read_image(&args.target)?;
    let mut out = serde_json::Map::new();
    if !args.recons.is_empty() {
        let recons = args.recons.iter().map(|p| png_io::read_image(p)).collect::<CliResult<Vec<_>>>()?;
        let masks = args.masks.iter().map(|p| png_io::read_mask(p)).collect::<CliResult<Vec<Mask>>>()?;
        let cfg = PhotometricConfig { alpha: args.alpha, clip_percentile: args.clip_percentile, ..Default::default() };
        let robust = RobustLossParams::new(args.rho, args.scale)?;
        let loss = photometric_loss(&target, &recons, &masks, &cfg, robust)?;
        if let Some(p) = &ctx.out {
            pfm::write_map(p, &loss.map)?;
        }
        out.insert("photometric".into(), json!(loss.value));
        out.insert("valid_pixels".into(), json!(loss.valid.count()));
    } else if !args.masks.is_empty() {
        return Err(CliError::Invalid("--mask given without --recon".into()));
    }
    if let Some(p) = &args.distance {
        out.insert("smoothness".into(), json!(smoothness_loss(&pfm::read_map(p)?, &target)?));
    }
    if !args.frames.is_empty() {
        let (Some(poses), Some(calib)) = (&args.poses, &args.calib) else {
            return Err(CliError::Invalid("--frame needs --poses and --calib".into()));
        };
        let model = CalibrationFile::load(calib)?.to_model()?;
        let frames = args.frames.iter().map(|p| pfm::read_map(p)).collect::<CliResult<Vec<_>>>()?;
        out.insert("csdc".into(), json!(csdc_loss(&frames, &read_poses(poses)?, &model, None)?));
    }
    if out.is_empty() {
        return Err(CliError::Invalid("nothing to evaluate: pass --recon, --distance or --frame".into()));
    }
    Ok(Value::Object(out))
}
