use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polarmask::codec::CenterMode;
use polarmask::io::commands::{
    run_losscheck, run_pipeline, run_sweep, run_synth, CorpusKind, CorpusSource, LossCheckArgs,
    PipelineArgs, SweepArgs, SynthArgs, DEFAULT_N_LIST, DEFAULT_RASTER_SIZE,
};
use polarmask::postprocess::{DEFAULT_IOU_THRESHOLD, DEFAULT_TOP_K};

/// Polar contour masks: representation sweeps, loss checks and NMS.
#[derive(Parser)]
#[command(name = "polarmask", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Round-trip IoU of encode/decode per ray count and center mode.
    Sweep(SweepCmd),
    /// Fixed-step descent under Polar IoU loss and Smooth-L1.
    Losscheck(LossCheckCmd),
    /// Score filter, top-k, NMS and decoding of a detections file.
    Pipeline(PipelineCmd),
    /// Write a synthetic corpus as annotation JSON.
    Synth(SynthCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum CenterArg {
    Mass,
    Box,
    Both,
}

impl CenterArg {
    fn modes(self) -> Vec<CenterMode> {
        match self {
            CenterArg::Mass => vec![CenterMode::Mass],
            CenterArg::Box => vec![CenterMode::Box],
            CenterArg::Both => vec![CenterMode::Mass, CenterMode::Box],
        }
    }
}

#[derive(Args)]
struct SweepCmd {
    /// COCO-style annotation file.
    #[arg(long, conflicts_with = "synthetic")]
    annotations: Option<PathBuf>,
    /// Synthetic corpus kind: circles, convex, stars, crescents or mixed.
    #[arg(long)]
    synthetic: Option<CorpusKind>,
    /// Shapes per kind for synthetic corpora.
    #[arg(long, default_value_t = 50)]
    count: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_N_LIST)]
    n_list: Vec<usize>,
    #[arg(long, value_enum, default_value = "both")]
    center: CenterArg,
    #[arg(long, default_value_t = DEFAULT_RASTER_SIZE)]
    raster_size: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct LossCheckCmd {
    #[arg(long, default_value_t = 36)]
    n: usize,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 300)]
    steps: usize,
    /// Step size of the fixed-step descent.
    #[arg(long, default_value_t = 30.0, allow_negative_numbers = true)]
    lr: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PipelineCmd {
    /// Detections JSON: [{center, rays, score, class_id}, ...].
    #[arg(long)]
    detections: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOP_K)]
    top_k: usize,
    #[arg(long, default_value_t = DEFAULT_IOU_THRESHOLD)]
    iou_thresh: f64,
    #[arg(long, default_value_t = 0.05)]
    score_thresh: f64,
    /// Suppress across classes.
    #[arg(long)]
    class_agnostic: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SynthCmd {
    #[arg(long)]
    kind: CorpusKind,
    /// Shapes per kind.
    #[arg(long, default_value_t = 50)]
    count: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn run(cli: Cli) -> polarmask::Result<String> {
    match cli.command {
        Command::Sweep(c) => {
            let source = match (c.annotations, c.synthetic) {
                (Some(path), _) => CorpusSource::Annotations(path),
                (None, Some(kind)) => CorpusSource::Synthetic {
                    kind,
                    count: c.count,
                    seed: c.seed,
                },
                (None, None) => {
                    return Err(polarmask::Error::InvalidArgument(
                        "one of --annotations or --synthetic is required".into(),
                    ))
                }
            };
            let report = run_sweep(&SweepArgs {
                source,
                n_list: c.n_list,
                centers: c.center.modes(),
                raster_size: c.raster_size,
                out: c.out,
            })?;
            Ok(format!(
                "{} rows, {} instances skipped before encoding",
                report.rows.len(),
                report.skipped
            ))
        }
        Command::Losscheck(c) => {
            let outcomes = run_losscheck(&LossCheckArgs {
                n: c.n,
                trials: c.trials,
                steps: c.steps,
                lr: c.lr,
                seed: c.seed,
                out: c.out,
            })?;
            Ok(outcomes
                .iter()
                .map(|o| {
                    format!(
                        "{}: {}/{} trials reach polar IoU >= 0.99",
                        o.objective.label(),
                        o.trials_reaching(0.99),
                        c.trials
                    )
                })
                .collect::<Vec<_>>()
                .join("\n"))
        }
        Command::Pipeline(c) => {
            let output = run_pipeline(&PipelineArgs {
                detections: c.detections,
                top_k: c.top_k,
                iou_thresh: c.iou_thresh,
                score_thresh: c.score_thresh,
                class_aware: !c.class_agnostic,
                out: c.out,
            })?;
            Ok(format!("{} detections kept", output.detections.len()))
        }
        Command::Synth(c) => {
            let set = run_synth(&SynthArgs {
                kind: c.kind,
                count: c.count,
                seed: c.seed,
                out: c.out,
            })?;
            Ok(format!("{} instances written", set.instances.len()))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(summary) => {
            eprintln!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!(
                "error: {}",
                e.to_string().lines().next().unwrap_or_default()
            );
            ExitCode::from(2)
        }
    }
}
