use std::path::PathBuf;

use clap::Args;
use fpk_core::reps::{fit_all, rep_iou};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::Ctx;
use crate::error::CliResult;
use crate::formats::png_io;
use crate::formats::records::RepRecord;

#[derive(Debug, Clone, Args)]
pub struct RepsArgs {
    /// Instance mask PNG; repeat for several.
    #[arg(long = "mask", required = true)]
    pub masks: Vec<PathBuf>,
    /// Polygon vertex count.
    #[arg(long, default_value_t = 24)]
    pub vertices: usize,
}

/// Every representation fitted to each mask's largest component, with its
/// IoU against the mask.
pub fn reps(args: &RepsArgs, _ctx: &Ctx) -> CliResult<Value> {
    let results = args
        .masks
        .par_iter()
        .map(|path| {
            let mask = png_io::read_mask(path)?;
            let fitted = fit_all(&mask, args.vertices)?
                .iter()
                .map(|r| json!({"name": r.name(), "iou": rep_iou(r, &mask), "representation": RepRecord::from(r)}))
                .collect::<Vec<Value>>();
            Ok(json!({"mask": path.display().to_string(), "pixels": mask.count(), "representations": fitted}))
        })
        .collect::<CliResult<Vec<Value>>>()?;
    Ok(json!({"vertices": args.vertices, "masks": results}))
}
