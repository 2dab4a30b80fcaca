use std::path::PathBuf;

use clap::{Args, ValueEnum};
use fpk_core::cgt::{assemble_cgt, CHANNEL_NAMES};
use fpk_core::fitting::{
    equidistant_fov_deviation, fit_radial, stereographic_division_check, ucm_pinhole_check, ucm_stereographic_check,
    FitOptions, RadialSamples, EQUIVALENCE_SAMPLES,
};
use fpk_core::{ModelKind, Vec3};
use serde::Deserialize;
use serde_json::{json, Value};

use super::{parse_array, Ctx};
use crate::calib::CalibrationFile;
use crate::error::{CliError, CliResult};
use crate::formats::pfm;

const EQUIVALENCE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Args)]
pub struct ProjectArgs {
    #[arg(long)]
    pub calib: PathBuf,
    /// Camera-frame point x,y,z; repeat for several.
    #[arg(long = "point", value_parser = parse_array::<3>, required = true, allow_hyphen_values = true)]
    pub points: Vec<[f64; 3]>,
}

fn one_or_many(mut v: Vec<Value>) -> Value {
    if v.len() == 1 {
        v.remove(0)
    } else {
        Value::Array(v)
    }
}

pub fn project(args: &ProjectArgs, _ctx: &Ctx) -> CliResult<Value> {
    let model = CalibrationFile::load(&args.calib)?.to_model()?;
    let out = args
        .points
        .iter()
        .map(|&[x, y, z]| {
            let [u, v] = model.project(Vec3::new(x, y, z))?;
            Ok(json!({"u": u, "v": v}))
        })
        .collect::<CliResult<Vec<Value>>>()?;
    Ok(one_or_many(out))
}

#[derive(Debug, Clone, Args)]
pub struct UnprojectArgs {
    #[arg(long)]
    pub calib: PathBuf,
    /// Pixel u,v; repeat for several.
    #[arg(long = "pixel", value_parser = parse_array::<2>, required = true, allow_hyphen_values = true)]
    pub pixels: Vec<[f64; 2]>,
    /// Euclidean distance of the returned point; unit ray when omitted.
    #[arg(long)]
    pub distance: Option<f64>,
}

pub fn unproject(args: &UnprojectArgs, _ctx: &Ctx) -> CliResult<Value> {
    let model = CalibrationFile::load(&args.calib)?.to_model()?;
    let out = args
        .pixels
        .iter()
        .map(|&px| {
            let p = model.unproject(px, args.distance)?;
            Ok(json!({"x": p.x, "y": p.y, "z": p.z}))
        })
        .collect::<CliResult<Vec<Value>>>()?;
    Ok(one_or_many(out))
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// Source camera; also supplies the fitted model's intrinsics.
    #[arg(long)]
    pub calib: PathBuf,
    /// Target model family.
    #[arg(long)]
    pub family: String,
    /// CSV with `theta,r` columns used instead of sampling the source model.
    #[arg(long)]
    pub radial: Option<PathBuf>,
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    /// Largest sampled field angle; defaults to the source model's limit.
    #[arg(long)]
    pub theta_end: Option<f64>,
    #[arg(long, default_value_t = FitOptions::default().max_iterations)]
    pub max_iterations: usize,
}

#[derive(Debug, Deserialize)]
struct RadialRow {
    theta: f64,
    r: f64,
}

fn read_radial(path: &std::path::Path) -> CliResult<RadialSamples> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::format(path, e.to_string()))?;
    let pairs = rdr
        .deserialize::<RadialRow>()
        .map(|r| r.map(|r| (r.theta, r.r)).map_err(|e| CliError::format(path, e.to_string())))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(RadialSamples::new(pairs, path.display().to_string())?)
}

/// Writes the fitted calibration to `--out` when given.
pub fn fit(args: &FitArgs, ctx: &Ctx) -> CliResult<Value> {
    let family = ModelKind::from_name(&args.family)
        .ok_or_else(|| CliError::Invalid(format!("unknown model family '{}'", args.family)))?;
    let source = CalibrationFile::load(&args.calib)?.to_model()?;
    let samples = match &args.radial {
        Some(p) => read_radial(p)?,
        None => RadialSamples::from_model(&source, args.samples, args.theta_end.unwrap_or(source.theta_max()))?,
    };
    let report =
        fit_radial(&samples, family, *source.intrinsics(), FitOptions { max_iterations: args.max_iterations })?;
    let calib = CalibrationFile::from_model(&report.model);
    if let Some(out) = &ctx.out {
        crate::formats::write_bytes(out, (serde_json::to_string_pretty(&calib)? + "\n").as_bytes())?;
    }
    Ok(json!({
        "source": source.kind().name(),
        "family": family.name(),
        "params": calib.params,
        "samples": samples.len(),
        "theta_end": samples.theta_end(),
        "max_residual": report.max_residual,
        "rms_residual": report.rms_residual,
        "iterations": report.iterations,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EquivCheck {
    EquidistantFov,
    StereographicDivision,
    UcmPinhole,
    UcmStereographic,
}

#[derive(Debug, Clone, Args)]
pub struct EquivArgs {
    #[arg(long, value_enum)]
    pub check: EquivCheck,
    /// FOV model parameter.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Stereographic focal length, in normalised units like the others.
    #[arg(long, default_value_t = 1.0)]
    pub fs: f64,
    /// Pinhole focal length.
    #[arg(long, default_value_t = 1.0)]
    pub fp: f64,
    /// UCM focal length.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
}

pub fn equiv(args: &EquivArgs, _ctx: &Ctx) -> CliResult<Value> {
    let (name, dev) = match args.check {
        EquivCheck::EquidistantFov => ("equidistant-fov", equidistant_fov_deviation(args.omega)?),
        EquivCheck::StereographicDivision => {
            ("stereographic-division", stereographic_division_check(args.fs, args.fp)?)
        }
        EquivCheck::UcmPinhole => ("ucm-pinhole", ucm_pinhole_check(args.gamma)?),
        EquivCheck::UcmStereographic => ("ucm-stereographic", ucm_stereographic_check(args.fs)?),
    };
    Ok(json!({
        "check": name,
        "samples": EQUIVALENCE_SAMPLES,
        "max_deviation": dev,
        "tolerance": EQUIVALENCE_TOLERANCE,
        "within_tolerance": dev < EQUIVALENCE_TOLERANCE,
    }))
}

#[derive(Debug, Clone, Args)]
pub struct CgtArgs {
    #[arg(long)]
    pub calib: PathBuf,
    /// Output resolution W,H; defaults to the sensor size.
    #[arg(long, value_parser = super::parse_size)]
    pub size: Option<[usize; 2]>,
}

/// One PFM per channel in the `--out` directory.
pub fn cgt(args: &CgtArgs, ctx: &Ctx) -> CliResult<Value> {
    let dir = ctx.out_path("the tensor channels")?;
    let model = CalibrationFile::load(&args.calib)?.to_model()?;
    let [w, h] = args.size.unwrap_or(model.size());
    let t = assemble_cgt(&model, w, h)?;
    let mut files = Vec::with_capacity(CHANNEL_NAMES.len());
    for (name, ch) in CHANNEL_NAMES.iter().zip(&t.channels) {
        let path = dir.join(format!("{name}.pfm"));
        pfm::write_map(&path, ch)?;
        files.push(path.display().to_string());
    }
    Ok(json!({"model": model.kind().name(), "width": w, "height": h, "channels": CHANNEL_NAMES, "files": files}))
}
