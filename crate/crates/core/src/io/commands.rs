//! Library side of the command-line tools. Each `run_*` validates its
//! arguments, computes everything, and only then writes its output file, so
//! a failed run leaves no partial output behind.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::codec::{decode, upper_bound_sweep, CenterMode};
use crate::error::{Error, Result};
use crate::geometry::{BBox, Polygon};
use crate::io::annotations::{
    annotations_to_json, load_annotations, AnnotationSet, ImageInfo, Instance,
};
use crate::io::detections::{load_detections, to_fixed_json, PipelineOutput, PipelineRecord};
use crate::io::report::{losscheck_csv, LossTraceRow, SweepReport};
use crate::io::synth::{kind_seed, mixed_corpus, synth_corpus, SynthKind, CANVAS};
use crate::loss::{descend, Objective, DEFAULT_SMOOTH_L1_BETA, SMOOTH_L1_ALPHAS};
use crate::postprocess::{min_bbox, nms, top_k, Detection};

pub const DEFAULT_N_LIST: [usize; 6] = [18, 24, 36, 72, 90, 120];
pub const DEFAULT_RASTER_SIZE: usize = 256;

/// A single synthetic kind, or all four kinds with `count` shapes each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusKind {
    Single(SynthKind),
    Mixed,
}

impl CorpusKind {
    pub fn generate(self, count: usize, seed: u64) -> Vec<Polygon<f64>> {
        match self {
            CorpusKind::Single(kind) => synth_corpus(kind, count, seed),
            CorpusKind::Mixed => mixed_corpus(count, seed),
        }
    }
}

impl fmt::Display for CorpusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusKind::Single(k) => k.fmt(f),
            CorpusKind::Mixed => f.write_str("mixed"),
        }
    }
}

impl FromStr for CorpusKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "mixed" {
            Ok(CorpusKind::Mixed)
        } else {
            s.parse().map(CorpusKind::Single)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CorpusSource {
    Annotations(PathBuf),
    Synthetic {
        kind: CorpusKind,
        count: usize,
        seed: u64,
    },
}

/// Polygons of a corpus with its display name and the number of instances
/// or polygon parts dropped while loading.
pub fn load_corpus(source: &CorpusSource) -> Result<(String, Vec<Polygon<f64>>, usize)> {
    match source {
        CorpusSource::Annotations(path) => {
            let set = load_annotations(path)?;
            let (polys, dropped) = set.largest_polygons();
            let skipped = set.skipped + set.rle_skipped + dropped;
            Ok((path.display().to_string(), polys, skipped))
        }
        CorpusSource::Synthetic { kind, count, seed } => Ok((
            format!("{kind}:{count}:{seed}"),
            kind.generate(*count, *seed),
            0,
        )),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepArgs {
    pub source: CorpusSource,
    pub n_list: Vec<usize>,
    pub centers: Vec<CenterMode>,
    pub raster_size: usize,
    pub out: PathBuf,
}

/// Sweep over `n_list` (outer) and `centers` (inner); writes the CSV.
pub fn run_sweep(args: &SweepArgs) -> Result<SweepReport> {
    if args.n_list.is_empty() || args.centers.is_empty() {
        return Err(Error::InvalidArgument(
            "n-list and center modes must be non-empty".into(),
        ));
    }
    if args.raster_size == 0 {
        return Err(Error::InvalidArgument("raster size must be >= 1".into()));
    }
    let (corpus_name, polys, skipped) = load_corpus(&args.source)?;
    if polys.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let per_mode = args
        .centers
        .iter()
        .map(|&mode| upper_bound_sweep(&polys, &args.n_list, mode, args.raster_size))
        .collect::<Result<Vec<_>>>()?;
    let rows = (0..args.n_list.len())
        .flat_map(|i| per_mode.iter().map(move |rows| rows[i].clone()))
        .collect();
    let report = SweepReport {
        corpus_name,
        rows,
        skipped,
    };
    fs::write(&args.out, report.to_csv())?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LossCheckArgs {
    pub n: usize,
    pub trials: usize,
    pub steps: usize,
    pub lr: f64,
    pub seed: u64,
    pub out: PathBuf,
}

impl LossCheckArgs {
    pub fn with_out(out: impl Into<PathBuf>) -> Self {
        Self {
            n: 36,
            trials: 50,
            steps: 300,
            lr: 30.0,
            seed: 42,
            out: out.into(),
        }
    }
}

/// Final Polar IoU reached by an objective in every trial.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveOutcome {
    pub objective: Objective,
    pub final_polar_iou: Vec<f64>,
}

impl ObjectiveOutcome {
    pub fn trials_reaching(&self, threshold: f64) -> usize {
        self.final_polar_iou
            .iter()
            .filter(|&&v| v >= threshold)
            .count()
    }
}

pub fn losscheck_objectives() -> Vec<Objective> {
    std::iter::once(Objective::PolarIou)
        .chain(SMOOTH_L1_ALPHAS.iter().map(|&alpha| Objective::SmoothL1 {
            beta: DEFAULT_SMOOTH_L1_BETA,
            alpha,
        }))
        .collect()
}

/// Target and common starting rays for each trial.
///
/// Targets are `R · U(0.7, 1.3)` per ray with `R ~ U(8, 16)` px; starts
/// perturb each target ray by a factor `U(0.5, 1.5)`.
pub fn losscheck_trials(n: usize, trials: usize, seed: u64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            let base = rng.gen_range(8.0..16.0);
            let target: Vec<f64> = (0..n).map(|_| base * rng.gen_range(0.7..1.3)).collect();
            let start = target.iter().map(|t| t * rng.gen_range(0.5..1.5)).collect();
            (target, start)
        })
        .collect()
}

/// Fixed-step descent under every objective from a shared start; writes
/// the per-step trace CSV.
pub fn run_losscheck(args: &LossCheckArgs) -> Result<Vec<ObjectiveOutcome>> {
    if args.n < 4 {
        return Err(Error::InvalidArgument(format!(
            "n = {} is below 4 rays",
            args.n
        )));
    }
    if args.trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    if !args.lr.is_finite() || args.lr < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "step size {} must be >= 0",
            args.lr
        )));
    }
    let objectives = losscheck_objectives();
    let mut outcomes: Vec<ObjectiveOutcome> = objectives
        .iter()
        .map(|&objective| ObjectiveOutcome {
            objective,
            final_polar_iou: Vec::with_capacity(args.trials),
        })
        .collect();
    let mut rows = Vec::new();
    for (trial, (target, start)) in losscheck_trials(args.n, args.trials, args.seed)
        .into_iter()
        .enumerate()
    {
        for outcome in &mut outcomes {
            let (trace, _) = descend(&target, &start, outcome.objective, args.lr, args.steps)?;
            let label = outcome.objective.label();
            outcome
                .final_polar_iou
                .push(trace.last().expect("trace has steps + 1 entries").polar_iou);
            rows.extend(trace.into_iter().enumerate().map(|(step, s)| LossTraceRow {
                trial,
                step,
                objective: label.clone(),
                loss: s.loss,
                polar_iou: s.polar_iou,
            }));
        }
    }
    fs::write(&args.out, losscheck_csv(&rows))?;
    Ok(outcomes)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineArgs {
    pub detections: PathBuf,
    pub top_k: usize,
    pub iou_thresh: f64,
    pub score_thresh: f64,
    pub class_aware: bool,
    pub out: PathBuf,
}

/// Score filter, then top-k, then NMS.
pub fn assemble(
    dets: &[Detection<f64>],
    k: usize,
    iou_thresh: f64,
    score_thresh: f64,
    class_aware: bool,
) -> Result<Vec<Detection<f64>>> {
    let passed: Vec<Detection<f64>> = dets
        .iter()
        .filter(|d| d.score >= score_thresh)
        .cloned()
        .collect();
    nms(&top_k(&passed, k), iou_thresh, class_aware)
}

pub fn pipeline_record(d: &Detection<f64>) -> PipelineRecord {
    let c = d.mask.center();
    let BBox {
        x_min,
        y_min,
        x_max,
        y_max,
    } = min_bbox(&d.mask);
    PipelineRecord {
        center: [c.x, c.y],
        rays: d.mask.rays().to_vec(),
        score: d.score,
        class_id: d.class_id,
        bbox: [x_min, y_min, x_max, y_max],
        contour: decode(&d.mask)
            .vertices()
            .iter()
            .map(|p| [p.x, p.y])
            .collect(),
    }
}

pub fn run_pipeline(args: &PipelineArgs) -> Result<PipelineOutput> {
    if !(args.score_thresh >= 0.0 && args.score_thresh <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "score threshold {} outside [0, 1]",
            args.score_thresh
        )));
    }
    let dets = load_detections(&args.detections)?;
    let kept = assemble(
        &dets,
        args.top_k,
        args.iou_thresh,
        args.score_thresh,
        args.class_aware,
    )?;
    let output = PipelineOutput {
        detections: kept.iter().map(pipeline_record).collect(),
    };
    fs::write(&args.out, to_fixed_json(&output))?;
    Ok(output)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthArgs {
    pub kind: CorpusKind,
    pub count: usize,
    pub seed: u64,
    pub out: PathBuf,
}

/// Synthetic corpus as an annotation set on one `CANVAS`-sized image.
/// Category ids follow [`SynthKind::ALL`] order, starting at 1.
pub fn synth_annotations(kind: CorpusKind, count: usize, seed: u64) -> AnnotationSet {
    let groups: Vec<(u64, Vec<Polygon<f64>>)> = match kind {
        CorpusKind::Single(k) => vec![(category_of(k), synth_corpus(k, count, seed))],
        CorpusKind::Mixed => SynthKind::ALL
            .into_iter()
            .enumerate()
            .map(|(i, k)| (category_of(k), synth_corpus(k, count, kind_seed(seed, i))))
            .collect(),
    };
    AnnotationSet {
        images: vec![ImageInfo {
            id: 1,
            width: CANVAS as u32,
            height: CANVAS as u32,
        }],
        instances: groups
            .into_iter()
            .flat_map(|(category_id, polys)| {
                polys.into_iter().map(move |p| Instance {
                    image_id: 1,
                    category_id,
                    polygons: vec![p],
                })
            })
            .collect(),
        skipped: 0,
        rle_skipped: 0,
    }
}

fn category_of(kind: SynthKind) -> u64 {
    SynthKind::ALL
        .iter()
        .position(|&k| k == kind)
        .expect("known kind") as u64
        + 1
}

pub fn run_synth(args: &SynthArgs) -> Result<AnnotationSet> {
    if args.count == 0 {
        return Err(Error::InvalidArgument("count must be >= 1".into()));
    }
    let set = synth_annotations(args.kind, args.count, args.seed);
    let mut text = annotations_to_json(&set);
    text.push('\n');
    fs::write(&args.out, text)?;
    Ok(set)
}
