use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fpk::commands::{self, Ctx};
use fpk::CliResult;
use serde_json::Value;

#[derive(Debug, Parser)]
#[command(name = "fpk", version, about = "Fisheye camera geometry and perception toolkit")]
struct Cli {
    /// Worker threads for internal parallelism; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for stochastic choices (reserved; no command is stochastic).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Artefact path (file or directory, per command). Commands without an
    /// artefact write their JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Project camera-frame points to pixels.
    Project(commands::ProjectArgs),
    /// Back-project pixels to rays or points.
    Unproject(commands::UnprojectArgs),
    /// Fit a model family to another model's radial curve.
    Fit(commands::FitArgs),
    /// Check an analytic equivalence between model families.
    Equiv(commands::EquivArgs),
    /// Write the six camera geometry tensor channels.
    Cgt(commands::CgtArgs),
    /// Synthesise a target view from a source frame, distance and pose.
    Warp(commands::WarpArgs),
    /// Photometric, smoothness and distance consistency losses.
    LossEval(commands::LossEvalArgs),
    /// Fit object representations to instance masks.
    Reps(commands::RepsArgs),
    /// Depth error and accuracy metrics.
    EvalDepth(commands::EvalDepthArgs),
    /// Semantic segmentation metrics.
    EvalSeg(commands::EvalSegArgs),
    /// Mean average precision over detection records.
    EvalDet(commands::EvalDetArgs),
    /// Task loss weights from a loss history.
    Weights(commands::WeightsArgs),
    /// Project a point cloud and remove occluded points.
    Lidar(commands::LidarArgs),
}

impl Command {
    /// Whether `--out` names an artefact rather than the JSON result.
    fn writes_artefact(&self) -> bool {
        matches!(self, Command::Fit(_) | Command::Cgt(_) | Command::Warp(_) | Command::LossEval(_) | Command::Lidar(_))
    }

    fn run(&self, ctx: &Ctx) -> CliResult<Value> {
        match self {
            Command::Project(a) => commands::project(a, ctx),
            Command::Unproject(a) => commands::unproject(a, ctx),
            Command::Fit(a) => commands::fit(a, ctx),
            Command::Equiv(a) => commands::equiv(a, ctx),
            Command::Cgt(a) => commands::cgt(a, ctx),
            Command::Warp(a) => commands::warp(a, ctx),
            Command::LossEval(a) => commands::loss_eval(a, ctx),
            Command::Reps(a) => commands::reps(a, ctx),
            Command::EvalDepth(a) => commands::eval_depth(a, ctx),
            Command::EvalSeg(a) => commands::eval_seg(a, ctx),
            Command::EvalDet(a) => commands::eval_det(a, ctx),
            Command::Weights(a) => commands::weights(a, ctx),
            Command::Lidar(a) => commands::lidar(a, ctx),
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    log::debug!("seed {}", cli.seed);
    let artefact = cli.command.writes_artefact();
    let ctx = Ctx { out: if artefact { cli.out.clone() } else { None } };
    let value = cli.command.run(&ctx)?;
    let text = serde_json::to_string(&value)?;
    match (&cli.out, artefact) {
        (Some(path), false) => std::fs::write(path, text + "\n")?,
        _ => println!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FPK_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
