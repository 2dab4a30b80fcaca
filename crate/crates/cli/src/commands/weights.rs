use std::path::PathBuf;

use clap::Args;
use fpk_core::weighting::{
    uncertainty_weighted_total, varnorm_weights, varnorm_weights_normalized, DEFAULT_WINDOW, VARIANCE_FLOOR,
};
use serde_json::{json, Value};

use super::Ctx;
use crate::error::{CliError, CliResult};
use crate::formats::history;

#[derive(Debug, Clone, Args)]
pub struct WeightsArgs {
    /// Loss history CSV with `epoch,task,loss` columns.
    #[arg(long, conflicts_with_all = ["losses", "sigmas"])]
    pub history: Option<PathBuf>,
    /// Epochs kept in the variance window.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
    #[arg(long, default_value_t = VARIANCE_FLOOR)]
    pub floor: f64,
    /// Rescale inverse-variance weights to sum to the task count.
    #[arg(long)]
    pub normalized: bool,
    /// Current task losses for the uncertainty-weighted total.
    #[arg(long, value_delimiter = ',', requires = "sigmas")]
    pub losses: Vec<f64>,
    /// Per-task noise parameters.
    #[arg(long, value_delimiter = ',', requires = "losses")]
    pub sigmas: Vec<f64>,
}

pub fn weights(args: &WeightsArgs, _ctx: &Ctx) -> CliResult<Value> {
    if let Some(path) = &args.history {
        let (tasks, h) = history::read(path, args.window)?;
        let weights = if args.normalized {
            varnorm_weights_normalized(&h, args.floor)?
        } else {
            varnorm_weights(&h, args.floor)?
        };
        return Ok(json!({
            "tasks": tasks,
            "epochs": h.epoch(),
            "variances": h.variances()?,
            "weights": weights,
        }));
    }
    if args.losses.is_empty() {
        return Err(CliError::Invalid("pass --history or --losses with --sigmas".into()));
    }
    Ok(json!({"uncertainty_total": uncertainty_weighted_total(&args.losses, &args.sigmas)?}))
}
