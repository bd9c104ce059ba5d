//! The `ringtrace` command line.
//!
//! Exit codes: 0 success, 2 usage error, 3 validation error, 4 I/O error.
//! Diagnostics go to stderr; `loss` prints its value on stdout and every
//! other subcommand writes files only.
//!
//! `trace` and `eval` also accept directories. Files are then paired by
//! stem: `<stem>.png` images, `<stem>.mask.png` masks and `<stem>.json`
//! annotations or detections, which is the layout `synth` produces.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io;
use crate::labels::{rasterize_classmap, rasterize_instancemap, scale_annotation, Annotation, DEFAULT_BOUNDARY_WIDTH};
use crate::metrics::{
    aggregate_reports, assign_rings, evaluate_disk, segmentation_loss, AssignParams, EvalOptions, LossWeights,
    MetricsReport, DEFAULT_CLOSE_FRAC, DEFAULT_DIST_FRAC,
};
use crate::model::{DiskDetection, RingCurve, DEFAULT_THETA};
use crate::resample::{resize_factors, resize_longest, resize_longest_nearest, DEFAULT_LANCZOS_A, DEFAULT_TARGET};
use crate::scorer::{BoundaryScorer, GradientScorer, MapScorer};
use crate::synth::{generate_disk, SynthConfig};
use crate::tracer::{trace_rings, TraceConfig};
use crate::viz::{overlay, polar_error_map};

const ERRMAP_CANVAS: usize = 512;

#[derive(Parser, Debug)]
#[command(name = "ringtrace", version, about = "Tree-ring delineation on disk cross-section images")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Render a synthetic disk: `<out>/synth_<seed>.{png,mask.png,json}`.
    Synth(SynthArgs),
    /// Rasterize an annotation into `<stem>.classmap.png` and `<stem>.instances.png`.
    Convert(ConvertArgs),
    /// Lanczos-resize an image so its longest side equals `--target`.
    Resize(ResizeArgs),
    /// Trace ring boundaries outward from the annotated pith.
    Trace(TraceArgs),
    /// Score a detection against ground truth.
    Eval(EvalArgs),
    /// Print the weighted segmentation loss of probability maps.
    Loss(LossArgs),
    /// Write an overlay and a polar error map for a detection.
    Viz(VizArgs),
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Number of ring boundaries.
    #[arg(long, default_value_t = 8)]
    rings: usize,
    /// Side of the square image in pixels.
    #[arg(long, default_value_t = DEFAULT_TARGET)]
    size: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Gaussian noise sigma as a fraction of full scale.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Ring center jitter as a fraction of the ring gap.
    #[arg(long, default_value_t = 0.0)]
    ecc: f64,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    #[arg(long)]
    ann: PathBuf,
    #[arg(long)]
    mask: PathBuf,
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Boundary stroke width in pixels.
    #[arg(long, default_value_t = DEFAULT_BOUNDARY_WIDTH)]
    boundary_width: f64,
}

#[derive(Args, Debug)]
struct ResizeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Longest side of the output in pixels.
    #[arg(long, default_value_t = DEFAULT_TARGET)]
    target: usize,
    #[arg(long)]
    out: PathBuf,
    /// Annotation to scale alongside; written next to `--out` as `<stem>.json`.
    #[arg(long)]
    ann: Option<PathBuf>,
    /// Mask to resize (nearest neighbour); written next to `--out` as `<stem>.mask.png`.
    #[arg(long)]
    mask: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ScorerKind {
    /// Radial intensity edges of the image itself.
    Gradient,
    /// Boundary probability maps given by `--maps`.
    Maps,
}

#[derive(Args, Debug)]
struct TraceArgs {
    /// Image PNG, or a directory of `<stem>.png`.
    #[arg(long)]
    image: PathBuf,
    /// Annotation whose pith seeds the trace, or a directory of `<stem>.json`.
    #[arg(long)]
    pith: PathBuf,
    /// Disk mask PNG, or a directory of `<stem>.mask.png`.
    #[arg(long)]
    mask: PathBuf,
    #[arg(long, value_enum, default_value_t = ScorerKind::Gradient)]
    scorer: ScorerKind,
    /// Probability-map stem (`<STEM>.{bg,ring,boundary,pith}.png`), or a directory of stems.
    #[arg(long)]
    maps: Option<PathBuf>,
    /// Detection JSON, or a directory in batch mode.
    #[arg(long)]
    out: PathBuf,
    /// Number of rays.
    #[arg(long, default_value_t = DEFAULT_THETA)]
    theta: usize,
    /// Fraction of rays that must vote stop.
    #[arg(long, default_value_t = 0.5)]
    stop_frac: f64,
    /// Strip width as a multiple of the previous ring width.
    #[arg(long, default_value_t = 2.0)]
    width_factor: f64,
    /// Minimum strip width as a fraction of the image's longest side.
    #[arg(long, default_value_t = 0.25)]
    floor_frac: f64,
    /// Upper bound on traced rings.
    #[arg(long, default_value_t = 80)]
    max_rings: usize,
    /// Worker threads for directory mode (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Detection JSON, or a directory of `<stem>.json`.
    #[arg(long)]
    det: PathBuf,
    /// Ground-truth annotation, or a directory of `<stem>.json`.
    #[arg(long)]
    gt: PathBuf,
    /// Disk mask PNG, or a directory of `<stem>.mask.png`.
    #[arg(long)]
    mask: PathBuf,
    /// Report JSON.
    #[arg(long)]
    out: PathBuf,
    /// Also write a CSV table.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Maximum mean distance to the matched ground truth, as a fraction of local ring width.
    #[arg(long, default_value_t = DEFAULT_CLOSE_FRAC)]
    close_frac: f64,
    /// Per-ray distance below which a ray counts as close, as a fraction of local ring width.
    #[arg(long, default_value_t = DEFAULT_DIST_FRAC)]
    dist_frac: f64,
    /// Leave the pith region out of mAR and ARAND.
    #[arg(long)]
    exclude_pith: bool,
    /// Number of rays used for ring matching.
    #[arg(long, default_value_t = DEFAULT_THETA)]
    theta: usize,
    /// Worker threads for directory mode (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args, Debug)]
struct LossArgs {
    /// Probability-map stem (`<STEM>.{bg,ring,boundary,pith}.png`).
    #[arg(long)]
    pred: PathBuf,
    /// Ground-truth class map PNG.
    #[arg(long)]
    gt: PathBuf,
    /// Background, boundary and pith weights.
    #[arg(long, default_value = "0.01,1.0,0.1")]
    weights: LossWeights,
}

#[derive(Args, Debug)]
struct VizArgs {
    #[arg(long)]
    image: PathBuf,
    #[arg(long)]
    det: PathBuf,
    #[arg(long)]
    gt: PathBuf,
    /// Output directory for `<stem>.overlay.png`, `<stem>.errmap.png` and `<stem>.errmap.json`.
    #[arg(long)]
    out: PathBuf,
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("ringtrace: {e}");
            if e.is_validation() {
                3
            } else {
                4
            }
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Synth(a) => synth(a),
        Command::Convert(a) => convert(a),
        Command::Resize(a) => resize(a),
        Command::Trace(a) => trace(a),
        Command::Eval(a) => eval(a),
        Command::Loss(a) => loss(a),
        Command::Viz(a) => viz(a),
    }
}

fn file_stem(path: &Path) -> String {
    let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    name.split('.').next().unwrap_or_default().to_string()
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    path.with_file_name(format!("{}{suffix}", file_stem(path)))
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::validation(format!("cannot start {jobs} worker threads: {e}")))?;
    Ok(pool.install(f))
}

/// Sorted stems of `<stem>.json` files in `dir`.
fn json_stems(dir: &Path) -> Result<Vec<String>> {
    let entries = std::fs::read_dir(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut stems = Vec::new();
    for entry in entries {
        let path = entry
            .map_err(|source| Error::Io {
                path: dir.to_path_buf(),
                source,
            })?
            .path();
        let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        if let Some(stem) = name.strip_suffix(".json") {
            if !stem.contains('.') {
                stems.push(stem.to_string());
            }
        }
    }
    stems.sort();
    if stems.is_empty() {
        return Err(Error::validation(format!("no <stem>.json files in {}", dir.display())));
    }
    Ok(stems)
}

fn synth(a: SynthArgs) -> Result<()> {
    let cfg = SynthConfig::new(a.size, a.rings, a.seed)
        .with_noise(a.noise)
        .with_eccentricity(a.ecc);
    let disk = generate_disk(&cfg)?;
    io::create_dir(&a.out)?;
    let stem = disk.annotation.image_name.clone();
    io::write_rgb(&a.out.join(format!("{stem}.png")), &disk.image)?;
    io::write_mask(&a.out.join(format!("{stem}.mask.png")), &disk.mask)?;
    io::write_annotation(&a.out.join(format!("{stem}.json")), &disk.annotation)
}

fn convert(a: ConvertArgs) -> Result<()> {
    let ann = io::read_annotation(&a.ann)?;
    let mask = io::read_mask(&a.mask)?;
    let classes = rasterize_classmap(&ann, &mask, a.boundary_width)?;
    let instances = rasterize_instancemap(&ann, &mask)?;
    io::create_dir(&a.out)?;
    let stem = file_stem(&a.ann);
    io::write_classmap(&a.out.join(format!("{stem}.classmap.png")), &classes)?;
    io::write_instancemap(&a.out.join(format!("{stem}.instances.png")), &instances)
}

fn resize(a: ResizeArgs) -> Result<()> {
    let image = io::read_rgb(&a.input)?;
    let out = resize_longest(&image, a.target, DEFAULT_LANCZOS_A)?;
    io::write_rgb(&a.out, &out)?;
    if let Some(ann_path) = &a.ann {
        let ann = io::read_annotation(ann_path)?;
        let (fx, _) = resize_factors(image.width(), image.height(), a.target);
        let mut scaled = scale_annotation(&ann, fx)?;
        scaled.width = out.width();
        scaled.height = out.height();
        io::write_annotation(&sibling(&a.out, ".json"), &scaled)?;
    }
    if let Some(mask_path) = &a.mask {
        let mask = io::read_mask(mask_path)?;
        let resized = resize_longest_nearest(&mask, a.target)?;
        io::write_mask(&sibling(&a.out, ".mask.png"), &resized)?;
    }
    Ok(())
}

struct TraceJob {
    image: PathBuf,
    pith: PathBuf,
    mask: PathBuf,
    maps: Option<PathBuf>,
    out: PathBuf,
}

fn trace_one(job: &TraceJob, kind: ScorerKind, cfg: &TraceConfig) -> Result<()> {
    let image = io::read_rgb(&job.image)?;
    let ann = io::read_annotation(&job.pith)?;
    let mask = io::read_mask(&job.mask)?;
    let pith = RingCurve::from_polygon(&ann.pith, ann.pith_center(), cfg.theta)?;
    let scorer: Box<dyn BoundaryScorer + Send> = match kind {
        ScorerKind::Gradient => Box::new(GradientScorer::default()),
        ScorerKind::Maps => {
            let stem = job
                .maps
                .as_ref()
                .ok_or_else(|| Error::validation("--scorer maps requires --maps"))?;
            Box::new(MapScorer::new(io::read_probability_maps(stem)?))
        }
    };
    let outcome = trace_rings(&image, &pith, &mask, &*scorer, cfg)?;
    let doc = Annotation::from_detection(
        &outcome.detection,
        file_stem(&job.image),
        image.width(),
        image.height(),
        Some(outcome.confidence),
    );
    io::write_annotation(&job.out, &doc)
}

fn trace(a: TraceArgs) -> Result<()> {
    let cfg = TraceConfig {
        theta: a.theta,
        stop_fraction: a.stop_frac,
        width_factor: a.width_factor,
        floor_fraction: a.floor_frac,
        max_rings: a.max_rings,
        ..TraceConfig::default()
    };
    cfg.validate()?;
    if a.scorer == ScorerKind::Maps && a.maps.is_none() {
        return Err(Error::validation("--scorer maps requires --maps"));
    }
    if !a.image.is_dir() {
        let job = TraceJob {
            image: a.image,
            pith: a.pith,
            mask: a.mask,
            maps: a.maps,
            out: a.out,
        };
        return trace_one(&job, a.scorer, &cfg);
    }
    let jobs: Vec<TraceJob> = json_stems(&a.pith)?
        .into_iter()
        .map(|stem| TraceJob {
            image: a.image.join(format!("{stem}.png")),
            pith: a.pith.join(format!("{stem}.json")),
            mask: a.mask.join(format!("{stem}.mask.png")),
            maps: a.maps.as_ref().map(|m| m.join(&stem)),
            out: a.out.join(format!("{stem}.json")),
        })
        .collect();
    io::create_dir(&a.out)?;
    let results = with_pool(a.jobs, || {
        jobs.par_iter()
            .map(|job| trace_one(job, a.scorer, &cfg))
            .collect::<Vec<_>>()
    })?;
    results.into_iter().collect()
}

#[derive(Serialize)]
struct BatchReport {
    disks: Vec<MetricsReport>,
    mean: MetricsReport,
}

fn eval_one(det: &Path, gt: &Path, mask: &Path, opts: &EvalOptions) -> Result<MetricsReport> {
    let det = io::read_annotation(det)?;
    let gt = io::read_annotation(gt)?;
    let mask = io::read_mask(mask)?;
    Ok(evaluate_disk(&det, &gt, &mask, opts)?.0)
}

fn csv_table(reports: &[MetricsReport]) -> String {
    let mut s = format!("{}\n", MetricsReport::CSV_HEADER);
    for r in reports {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

fn eval(a: EvalArgs) -> Result<()> {
    let opts = EvalOptions {
        assign: AssignParams {
            close_frac: a.close_frac,
            dist_frac: a.dist_frac,
        },
        exclude_pith: a.exclude_pith,
        theta: a.theta,
    };
    if !a.gt.is_dir() {
        let report = eval_one(&a.det, &a.gt, &a.mask, &opts)?;
        io::write_json(&a.out, &report)?;
        if let Some(csv) = &a.csv {
            io::write_text(csv, &csv_table(std::slice::from_ref(&report)))?;
        }
        return Ok(());
    }
    let stems = json_stems(&a.gt)?;
    let results = with_pool(a.jobs, || {
        stems
            .par_iter()
            .map(|stem| {
                eval_one(
                    &a.det.join(format!("{stem}.json")),
                    &a.gt.join(format!("{stem}.json")),
                    &a.mask.join(format!("{stem}.mask.png")),
                    &opts,
                )
            })
            .collect::<Vec<_>>()
    })?;
    let disks = results.into_iter().collect::<Result<Vec<_>>>()?;
    let mean = aggregate_reports(&disks, "mean")?;
    if let Some(csv) = &a.csv {
        let mut rows = disks.clone();
        rows.push(mean.clone());
        io::write_text(csv, &csv_table(&rows))?;
    }
    io::write_json(&a.out, &BatchReport { disks, mean })
}

fn loss(a: LossArgs) -> Result<()> {
    let pred = io::read_probability_maps(&a.pred)?;
    let gt = io::read_classmap(&a.gt)?;
    println!("{}", segmentation_loss(&pred, &gt, &a.weights)?);
    Ok(())
}

fn viz(a: VizArgs) -> Result<()> {
    let image = io::read_rgb(&a.image)?;
    let gt_ann = io::read_annotation(&a.gt)?;
    let det_ann = io::read_annotation(&a.det)?;
    let gt: DiskDetection = gt_ann.to_detection(DEFAULT_THETA)?;
    let det = det_ann.to_detection_from(gt.origin(), DEFAULT_THETA)?;
    let assignment = assign_rings(&det, &gt, AssignParams::default())?;
    let (errmap, sidecar) = polar_error_map(&assignment, &gt, ERRMAP_CANVAS);
    io::create_dir(&a.out)?;
    let stem = file_stem(&a.image);
    io::write_rgb(&a.out.join(format!("{stem}.overlay.png")), &overlay(&image, &gt, &det))?;
    io::write_rgb(&a.out.join(format!("{stem}.errmap.png")), &errmap)?;
    io::write_json(&a.out.join(format!("{stem}.errmap.json")), &sidecar)
}
