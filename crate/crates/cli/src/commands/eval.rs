use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use fpk_core::eval::{
    average_precision, depth_metrics, mean_ap, seg_metrics, ClassEval, DepthEvalConfig, DepthMetrics, Detection,
    GroundTruth, Interpolation,
};
use fpk_core::reps::mask_iou;
use fpk_core::Mask;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{parse_size, Ctx};
use crate::error::{CliError, CliResult};
use crate::formats::records::{read_jsonl, DetectionRecord, GroundTruthRecord};
use crate::formats::{pfm, png_io};

pub const PINHOLE_CAP: f64 = 80.0;
pub const FISHEYE_CAP: f64 = 40.0;

#[derive(Debug, Clone, Args)]
pub struct EvalDepthArgs {
    /// Predicted depth (PFM).
    #[arg(long)]
    pub pred: PathBuf,
    /// Ground-truth depth (PFM); zero marks missing samples.
    #[arg(long)]
    pub gt: PathBuf,
    /// Optional evaluation mask PNG.
    #[arg(long)]
    pub mask: Option<PathBuf>,
    /// Distance cap in metres; 80 by default, 40 with --fisheye.
    #[arg(long)]
    pub cap: Option<f64>,
    #[arg(long)]
    pub fisheye: bool,
    #[arg(long)]
    pub median_scaling: bool,
    #[arg(long, default_value_t = DepthEvalConfig::default().min_depth)]
    pub min_depth: f64,
}

pub fn eval_depth(args: &EvalDepthArgs, _ctx: &Ctx) -> CliResult<Value> {
    let pred = pfm::read_map(&args.pred)?;
    let gt = pfm::read_map(&args.gt)?;
    let mask = args.mask.as_deref().map(png_io::read_mask).transpose()?;
    let cap = args.cap.unwrap_or(if args.fisheye { FISHEYE_CAP } else { PINHOLE_CAP });
    let cfg = DepthEvalConfig { cap, min_depth: args.min_depth, median_scaling: args.median_scaling };
    let m = depth_metrics(&pred, &gt, mask.as_ref(), &cfg)?;
    let mut out: serde_json::Map<String, Value> =
        DepthMetrics::NAMES.iter().zip(m.values()).map(|(k, v)| (k.to_string(), json!(v))).collect();
    out.insert("cap".into(), json!(cap));
    Ok(Value::Object(out))
}

#[derive(Debug, Clone, Args)]
pub struct EvalSegArgs {
    /// Predicted label PNG.
    #[arg(long)]
    pub pred: PathBuf,
    /// Ground-truth label PNG.
    #[arg(long)]
    pub gt: PathBuf,
    /// Number of classes; defaults to the largest label plus one.
    #[arg(long)]
    pub classes: Option<usize>,
}

pub fn eval_seg(args: &EvalSegArgs, _ctx: &Ctx) -> CliResult<Value> {
    let pred = png_io::read_labels(&args.pred)?;
    let gt = png_io::read_labels(&args.gt)?;
    let classes = match args.classes {
        Some(k) => k,
        None => pred.data().iter().chain(gt.data()).copied().max().map_or(1, |m| m as usize + 1),
    };
    let m = seg_metrics(&pred, &gt, classes)?;
    Ok(json!({
        "classes": classes,
        "pixel_accuracy": m.pixel_accuracy,
        "mean_pixel_accuracy": m.mean_pixel_accuracy,
        "mean_iou": m.mean_iou,
        "class_iou": m.class_iou,
        "confusion": m.confusion,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InterpolationArg {
    AllPoint,
    ElevenPoint,
}

impl From<InterpolationArg> for Interpolation {
    fn from(a: InterpolationArg) -> Self {
        match a {
            InterpolationArg::AllPoint => Interpolation::AllPoint,
            InterpolationArg::ElevenPoint => Interpolation::ElevenPoint,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvalDetArgs {
    /// Detections as JSON lines.
    #[arg(long)]
    pub detections: PathBuf,
    /// Ground truth as JSON lines.
    #[arg(long)]
    pub ground_truth: PathBuf,
    /// Comma-separated IoU thresholds averaged into the mean AP.
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    pub iou: Vec<f64>,
    #[arg(long, value_enum, default_value_t = InterpolationArg::AllPoint)]
    pub interpolation: InterpolationArg,
    /// Raster size W,H used to score representations; defaults to the size of
    /// the first ground-truth mask.
    #[arg(long, value_parser = parse_size)]
    pub size: Option<[usize; 2]>,
}

/// Image id strings mapped to dense indices in order of first appearance.
#[derive(Default)]
struct ImageIds(BTreeMap<String, usize>);

impl ImageIds {
    fn index(&mut self, id: &str) -> usize {
        let n = self.0.len();
        *self.0.entry(id.to_string()).or_insert(n)
    }
}

pub fn eval_det(args: &EvalDetArgs, _ctx: &Ctx) -> CliResult<Value> {
    let thresholds = &args.iou;
    let dets: Vec<DetectionRecord> = read_jsonl(&args.detections)?;
    let gts: Vec<GroundTruthRecord> = read_jsonl(&args.ground_truth)?;
    let base = args.ground_truth.parent().map(PathBuf::from).unwrap_or_default();

    let gt_masks = gts
        .iter()
        .map(|g| match (&g.representation, &g.mask) {
            (None, Some(p)) => Ok(Some(png_io::read_mask(&base.join(p))?)),
            (Some(_), None) => Ok(None),
            _ => Err(CliError::Invalid(format!(
                "ground truth for '{}' needs exactly one of representation or mask",
                g.image_id
            ))),
        })
        .collect::<CliResult<Vec<Option<Mask>>>>()?;
    let [w, h] = match args.size {
        Some(s) => s,
        None => gt_masks
            .iter()
            .flatten()
            .next()
            .map(|m| [m.width(), m.height()])
            .ok_or_else(|| CliError::Invalid("--size is required when no ground truth is a mask".into()))?,
    };
    let raster = |r: &crate::formats::records::RepRecord| -> CliResult<Mask> { Ok(r.to_rep()?.rasterize(w, h)) };
    let gt_masks = gts
        .par_iter()
        .zip(gt_masks)
        .map(|(g, m)| match m {
            Some(m) if m.width() != w || m.height() != h => Err(CliError::Invalid(format!(
                "ground-truth mask for '{}' is {}x{}, expected {w}x{h}",
                g.image_id,
                m.width(),
                m.height()
            ))),
            Some(m) => Ok(m),
            None => raster(g.representation.as_ref().expect("checked above")),
        })
        .collect::<CliResult<Vec<Mask>>>()?;
    let det_masks = dets.par_iter().map(|d| raster(&d.representation)).collect::<CliResult<Vec<Mask>>>()?;

    let mut ids = ImageIds::default();
    let mut classes: BTreeMap<String, ClassEval<Mask, Mask>> = BTreeMap::new();
    let empty = || ClassEval { detections: Vec::new(), ground_truth: Vec::new() };
    for (g, m) in gts.iter().zip(gt_masks) {
        let image = ids.index(&g.image_id);
        classes.entry(g.class.clone()).or_insert_with(empty).ground_truth.push(GroundTruth { image, item: m });
    }
    for (d, m) in dets.iter().zip(det_masks) {
        let image = ids.index(&d.image_id);
        classes.entry(d.class.clone()).or_insert_with(empty).detections.push(Detection {
            image,
            score: d.score,
            item: m,
        });
    }

    let iou = |a: &Mask, b: &Mask| mask_iou(a, b).unwrap_or(0.0);
    let interp = Interpolation::from(args.interpolation);
    let list: Vec<ClassEval<Mask, Mask>> = classes.values().cloned().collect();
    let map = mean_ap(&list, thresholds, interp, iou)?;
    let mut per_class = serde_json::Map::new();
    for (name, c) in &classes {
        let ap = if c.ground_truth.is_empty() {
            Value::Null
        } else {
            let v = thresholds
                .iter()
                .map(|&t| average_precision(&c.detections, &c.ground_truth, t, interp, iou))
                .collect::<fpk_core::Result<Vec<f64>>>()?;
            json!(v)
        };
        per_class.insert(
            name.clone(),
            json!({"ap": ap, "detections": c.detections.len(), "ground_truth": c.ground_truth.len()}),
        );
    }
    Ok(json!({"map": map, "iou_thresholds": thresholds, "classes": per_class}))
}
