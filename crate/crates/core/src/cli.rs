//! Command-line front end: `detect`, `eval`, `repeatability`, `ablate` and
//! `bench`. The `elsed` binary only forwards to [`main`].
//!
//! Data goes to files or standard output, diagnostics to standard error.
//! `eval` and `repeatability` process images in parallel; set
//! `ELSED_THREADS` to cap the number of worker threads.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detector::{detect, detect_with_timings, AblationConfig, DetectorParams, StageTimings, ABLATION_CONFIGS};
use crate::error::{Error, Result};
use crate::eval::{pooled_curve, prefix_sums, repeatability, EvalMetrics, LengthSums, MatchGates};
use crate::geometry::Segment;
use crate::imgproc::GrayImage;
use crate::segio::{self, SegmentRecord};

#[derive(Parser, Debug)]
#[command(name = "elsed", version, about = "Line segment detection and evaluation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Detect segments in one image.
    Detect(DetectArgs),
    /// Score detections against ground truth (P, R, IoU, F, AP, bAP).
    Eval(EvalArgs),
    /// Repeatability over image pairs related by homographies.
    Repeatability(RepeatabilityArgs),
    /// Run the six ablation configurations over a set of images.
    Ablate(AblateArgs),
    /// Per-stage timing statistics.
    Bench(BenchArgs),
}

/// Detector parameter overrides; unset flags keep the defaults.
#[derive(Args, Debug, Clone, Default)]
pub struct ParamArgs {
    #[arg(long)]
    pub t_grad: Option<u16>,
    #[arg(long)]
    pub t_anchor: Option<u16>,
    #[arg(long)]
    pub scan_interval: Option<usize>,
    #[arg(long)]
    pub t_ol: Option<usize>,
    #[arg(long)]
    pub t_min_length: Option<usize>,
    #[arg(long)]
    pub t_line_fit_err: Option<f64>,
    #[arg(long)]
    pub t_px_to_seg_dist: Option<f64>,
    #[arg(long)]
    pub t_eigen_ext: Option<f64>,
    #[arg(long)]
    pub t_angle_ext_deg: Option<f64>,
    /// Angular tolerance of segment validation, radians.
    #[arg(long)]
    pub t_valid: Option<f64>,
    /// Comma-separated, ascending, e.g. `5,7,9`.
    #[arg(long, value_delimiter = ',')]
    pub jump_lengths: Option<Vec<usize>>,
    #[arg(long)]
    pub no_jumps: bool,
    #[arg(long)]
    pub no_jump_validation: bool,
    /// Disable segment validation (score becomes the segment length).
    #[arg(long)]
    pub no_validation: bool,
}

impl ParamArgs {
    pub fn params(&self) -> Result<DetectorParams> {
        let mut p = DetectorParams::default();
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = self.$f.clone() { p.$f = v; })* };
        }
        set!(t_grad, t_anchor, scan_interval, t_ol, t_min_length, t_line_fit_err, t_px_to_seg_dist, t_eigen_ext, t_angle_ext_deg, t_valid, jump_lengths);
        p.jumps_enabled &= !self.no_jumps;
        p.jump_validation_enabled &= !self.no_jump_validation;
        p.segment_validation_enabled &= !self.no_validation;
        p.check()?;
        Ok(p)
    }
}

/// Matching gate overrides.
#[derive(Args, Debug, Clone, Default)]
pub struct GateArgs {
    #[arg(long)]
    pub lambda_overlap: Option<f64>,
    /// Degrees.
    #[arg(long)]
    pub lambda_ang: Option<f64>,
    /// Pixels.
    #[arg(long)]
    pub lambda_dist: Option<f64>,
}

impl GateArgs {
    fn apply(&self, mut g: MatchGates) -> MatchGates {
        g.lambda_overlap = self.lambda_overlap.unwrap_or(g.lambda_overlap);
        g.lambda_ang = self.lambda_ang.unwrap_or(g.lambda_ang);
        g.lambda_dist = self.lambda_dist.unwrap_or(g.lambda_dist);
        g
    }
}

#[derive(Args, Debug)]
pub struct DetectArgs {
    /// PGM or PNG image.
    pub image: PathBuf,
    /// Segment file (.csv or .jsonl). CSV on standard output when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write a PNG with the segments drawn over the image.
    #[arg(long)]
    pub overlay: Option<PathBuf>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Directory of detection files, one per image, named by image stem.
    #[arg(long)]
    pub det: PathBuf,
    /// Directory of ground-truth files with the same stems.
    #[arg(long)]
    pub gt: PathBuf,
    /// Write the JSON report here.
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[command(flatten)]
    pub gates: GateArgs,
}

#[derive(Args, Debug)]
pub struct RepeatabilityArgs {
    /// CSV with header `image_a,image_b,homography`; relative paths are
    /// resolved against the manifest's directory. The homography maps
    /// image A coordinates to image B.
    pub manifest: PathBuf,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub gates: GateArgs,
}

#[derive(Args, Debug)]
pub struct AblateArgs {
    /// Images, or directories of PGM/PNG images.
    #[arg(required = true)]
    pub images: Vec<PathBuf>,
    /// Ground-truth directory; adds accuracy columns when given.
    #[arg(long)]
    pub gt: Option<PathBuf>,
    /// Timed runs per image and configuration.
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Images, or directories of PGM/PNG images.
    #[arg(required = true)]
    pub images: Vec<PathBuf>,
    #[arg(long, default_value_t = 50)]
    pub reps: usize,
    /// Untimed runs per image before measuring.
    #[arg(long, default_value_t = 3)]
    pub warmup: usize,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[command(flatten)]
    pub params: ParamArgs,
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run_from<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    run(cli)
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Detect(a) => cmd_detect(&a),
        Command::Eval(a) => {
            let report = with_pool(|| cmd_eval(&a.det, &a.gt, &a.gates.apply(MatchGates::default())))?;
            print!("{}", report.table());
            write_json(a.json.as_deref(), &report)
        }
        Command::Repeatability(a) => {
            let params = a.params.params()?;
            let gates = a.gates.apply(MatchGates::repeatability());
            let report = with_pool(|| cmd_repeatability(&a.manifest, &params, &gates))?;
            print!("{}", report.table());
            write_json(a.json.as_deref(), &report)
        }
        Command::Ablate(a) => {
            let report = cmd_ablate(&collect_images(&a.images)?, a.gt.as_deref(), a.reps)?;
            print!("{}", report.table());
            write_json(a.json.as_deref(), &report)
        }
        Command::Bench(a) => {
            let report = cmd_bench(&collect_images(&a.images)?, &a.params.params()?, a.reps, a.warmup)?;
            print!("{}", report.table());
            write_json(a.json.as_deref(), &report)
        }
    }
}

/// Entry point of the `elsed` binary.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn with_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let threads = std::env::var("ELSED_THREADS").ok().and_then(|v| v.parse::<usize>().ok());
    match threads.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let Some(path) = path else { return Ok(()) };
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Encode(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

fn is_image(p: &Path) -> bool {
    matches!(
        p.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref(),
        Some("pgm" | "png")
    )
}

fn list_dir(dir: &Path, keep: impl Fn(&Path) -> bool) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let p = entry.map_err(|e| Error::io(dir, e))?.path();
        if p.is_file() && keep(&p) {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

/// Expands directories into their PGM/PNG files, sorted by name.
pub fn collect_images(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            out.extend(list_dir(p, is_image)?);
        } else {
            out.push(p.clone());
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidParameter("no images given".into()));
    }
    Ok(out)
}

fn stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn records(segs: &[crate::validate::ValidatedSegment]) -> Vec<SegmentRecord> {
    segs.iter().map(SegmentRecord::from).collect()
}

fn cmd_detect(a: &DetectArgs) -> Result<()> {
    let params = a.params.params()?;
    let img = segio::load_image(&a.image)?;
    let segs = detect(&img, &params)?;
    let recs = records(&segs);
    match &a.output {
        Some(path) => segio::write_segments(path, &recs)?,
        None => {
            let mut out = std::io::stdout().lock();
            let io = |e| Error::io("<stdout>", e);
            writeln!(out, "x1,y1,x2,y2,score").map_err(io)?;
            for r in &recs {
                writeln!(out, "{:.6},{:.6},{:.6},{:.6},{:.6}", r.x1, r.y1, r.x2, r.y2, r.score).map_err(io)?;
            }
        }
    }
    if let Some(path) = &a.overlay {
        let s: Vec<Segment> = segs.iter().map(|v| v.segment).collect();
        segio::save_overlay(path, &img, &s)?;
    }
    eprintln!("{}: {} segments", a.image.display(), segs.len());
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImageEval {
    pub stem: String,
    pub detected: usize,
    pub ground_truth: usize,
    pub metrics: EvalMetrics,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub gates: MatchGates,
    pub images: Vec<ImageEval>,
    /// Length sums added over all images; AP from the pooled PR curve.
    pub pooled: EvalMetrics,
    /// Ground-truth stems without a detection file (scored as empty).
    pub missing_detections: Vec<String>,
    /// Detection stems without ground truth (skipped).
    pub missing_ground_truth: Vec<String>,
}

impl EvalReport {
    pub fn table(&self) -> String {
        let mut s = format!(
            "{:<24} {:>6} {:>6} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7}\n",
            "image", "det", "gt", "P", "R", "IoU", "F", "AP", "bAP"
        );
        let row = |name: &str, d: String, g: String, m: &EvalMetrics| {
            format!(
                "{:<24} {:>6} {:>6} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>7.4}\n",
                name, d, g, m.precision, m.recall, m.iou, m.f_score, m.ap, m.bap
            )
        };
        for im in &self.images {
            s += &row(&im.stem, im.detected.to_string(), im.ground_truth.to_string(), &im.metrics);
        }
        let nd: usize = self.images.iter().map(|i| i.detected).sum();
        let ng: usize = self.images.iter().map(|i| i.ground_truth).sum();
        s += &row("pooled", nd.to_string(), ng.to_string(), &self.pooled);
        s
    }
}

fn segment_files(dir: &Path) -> Result<BTreeMap<String, PathBuf>> {
    let files = list_dir(dir, |p| {
        matches!(p.extension().and_then(|e| e.to_str()), Some("csv" | "jsonl" | "ndjson"))
    })?;
    let mut map = BTreeMap::new();
    for f in files {
        let s = stem(&f);
        if let Some(prev) = map.insert(s.clone(), f.clone()) {
            eprintln!("warning: {} and {} share stem {s:?}; using the latter", prev.display(), f.display());
        }
    }
    Ok(map)
}

fn load_detections(path: &Path) -> Result<Vec<Segment>> {
    let mut recs = segio::read_segments(path)?;
    recs.sort_by(|a, b| b.score.total_cmp(&a.score));
    Ok(recs.iter().map(SegmentRecord::segment).collect())
}

/// Per-image prefix sums plus the empty-detection sums of one image.
fn evaluate_image(det: &[Segment], gt: &[Segment], gates: &MatchGates) -> (Vec<LengthSums>, LengthSums) {
    let empty = LengthSums {
        gt_length: gt.iter().map(Segment::length).sum(),
        ..Default::default()
    };
    (prefix_sums(det, gt, gates), empty)
}

fn summarize(prefixes: &[LengthSums], empty: &LengthSums) -> EvalMetrics {
    let mut m = prefixes.last().unwrap_or(empty).metrics();
    let curve = pooled_curve(&[(prefixes.to_vec(), *empty)]);
    m.ap = curve.ap;
    m.bap = curve.bap;
    m
}

/// Evaluates every ground-truth file in `gt_dir` against the detection file
/// with the same stem in `det_dir`.
pub fn cmd_eval(det_dir: &Path, gt_dir: &Path, gates: &MatchGates) -> Result<EvalReport> {
    let dets = segment_files(det_dir)?;
    let gts = segment_files(gt_dir)?;
    let missing_ground_truth: Vec<String> = dets.keys().filter(|k| !gts.contains_key(*k)).cloned().collect();
    let missing_detections: Vec<String> = gts.keys().filter(|k| !dets.contains_key(*k)).cloned().collect();
    for s in &missing_ground_truth {
        eprintln!("warning: no ground truth for detections {s:?}; skipped");
    }
    for s in &missing_detections {
        eprintln!("warning: no detections for {s:?}; scored as empty");
    }

    let jobs: Vec<(&String, &PathBuf)> = gts.iter().collect();
    let results = jobs
        .par_iter()
        .map(|(name, gt_path)| {
            let gt = segio::read_ground_truth(gt_path)?;
            let det = match dets.get(*name) {
                Some(p) => load_detections(p)?,
                None => Vec::new(),
            };
            let (prefixes, empty) = evaluate_image(&det, &gt, gates);
            let image = ImageEval {
                stem: (*name).clone(),
                detected: det.len(),
                ground_truth: gt.len(),
                metrics: summarize(&prefixes, &empty),
            };
            Ok((image, prefixes, empty))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut total = LengthSums::default();
    let mut per_image = Vec::with_capacity(results.len());
    let mut images = Vec::with_capacity(results.len());
    for (image, prefixes, empty) in results {
        total.add(prefixes.last().unwrap_or(&empty));
        per_image.push((prefixes, empty));
        images.push(image);
    }
    let mut pooled = total.metrics();
    let curve = pooled_curve(&per_image);
    pooled.ap = curve.ap;
    pooled.bap = curve.bap;
    Ok(EvalReport {
        gates: *gates,
        images,
        pooled,
        missing_detections,
        missing_ground_truth,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairResult {
    pub image_a: PathBuf,
    pub image_b: PathBuf,
    pub homography: PathBuf,
    pub segments_a: usize,
    pub segments_b: usize,
    pub length: f64,
    pub count: f64,
    pub no_shared_region: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkippedPair {
    pub line: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepeatabilityReport {
    pub gates: MatchGates,
    pub pairs: Vec<PairResult>,
    pub skipped: Vec<SkippedPair>,
    pub mean_length: f64,
    pub mean_count: f64,
}

impl RepeatabilityReport {
    pub fn table(&self) -> String {
        let mut s = format!("{:<40} {:>6} {:>6} {:>8} {:>8}\n", "pair", "nA", "nB", "length", "count");
        for p in &self.pairs {
            let name = format!("{} / {}", stem(&p.image_a), stem(&p.image_b));
            s += &format!(
                "{:<40} {:>6} {:>6} {:>8.4} {:>8.4}\n",
                name, p.segments_a, p.segments_b, p.length, p.count
            );
        }
        s += &format!("{:<40} {:>6} {:>6} {:>8.4} {:>8.4}\n", "mean", "", "", self.mean_length, self.mean_count);
        s
    }
}

#[derive(Deserialize)]
struct ManifestRow {
    image_a: PathBuf,
    image_b: PathBuf,
    homography: PathBuf,
}

fn dims(img: &GrayImage) -> (usize, usize) {
    (img.width(), img.height())
}

/// Detects in both images of every manifest pair and scores repeatability.
/// Pairs whose homography file is missing are skipped with a warning.
pub fn cmd_repeatability(manifest: &Path, params: &DetectorParams, gates: &MatchGates) -> Result<RepeatabilityReport> {
    let text = fs::read_to_string(manifest).map_err(|e| Error::io(manifest, e))?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::parse(manifest, e.position().map_or(0, |p| p.line() as usize), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let row: ManifestRow = rec.deserialize(None).map_err(|e| Error::parse(manifest, line, e.to_string()))?;
        let h_path = base.join(&row.homography);
        if !h_path.is_file() {
            eprintln!("warning: {}:{line}: homography {} not found; pair skipped", manifest.display(), h_path.display());
            skipped.push(SkippedPair {
                line,
                reason: format!("homography {} not found", h_path.display()),
            });
            continue;
        }
        rows.push((base.join(&row.image_a), base.join(&row.image_b), h_path));
    }

    let pairs = rows
        .par_iter()
        .map(|(pa, pb, ph)| {
            let h_a_to_b = segio::load_homography(ph)?;
            let (ia, ib) = (segio::load_image(pa)?, segio::load_image(pb)?);
            let sa: Vec<Segment> = detect(&ia, params)?.iter().map(|v| v.segment).collect();
            let sb: Vec<Segment> = detect(&ib, params)?.iter().map(|v| v.segment).collect();
            let r = repeatability(&sa, &sb, &h_a_to_b.inverse(), dims(&ia), dims(&ib), gates);
            Ok(PairResult {
                image_a: pa.clone(),
                image_b: pb.clone(),
                homography: ph.clone(),
                segments_a: sa.len(),
                segments_b: sb.len(),
                length: r.length,
                count: r.count,
                no_shared_region: r.no_shared_region,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = pairs.len().max(1) as f64;
    Ok(RepeatabilityReport {
        gates: *gates,
        mean_length: pairs.iter().map(|p| p.length).sum::<f64>() / n,
        mean_count: pairs.iter().map(|p| p.count).sum::<f64>() / n,
        pairs,
        skipped,
    })
}

/// Mean and population standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AblationRow {
    pub label: String,
    pub config: AblationConfig,
    pub mean_ms: f64,
    pub std_ms: f64,
    pub mean_segments: f64,
    /// Present when ground truth was supplied.
    pub metrics: Option<EvalMetrics>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AblationReport {
    pub images: usize,
    pub reps: usize,
    pub rows: Vec<AblationRow>,
}

impl AblationReport {
    pub fn table(&self) -> String {
        let mut s = format!(
            "{:<34} {:>14} {:>8} {:>7} {:>7} {:>7} {:>7}\n",
            "configuration", "ms/image", "segs", "P", "R", "IoU", "AP"
        );
        for r in &self.rows {
            let time = format!("{:.2}±{:.2}", r.mean_ms, r.std_ms);
            s += &format!("{:<34} {:>14} {:>8.1}", r.label, time, r.mean_segments);
            match &r.metrics {
                Some(m) => s += &format!(" {:>7.4} {:>7.4} {:>7.4} {:>7.4}\n", m.precision, m.recall, m.iou, m.ap),
                None => s += &format!(" {:>7} {:>7} {:>7} {:>7}\n", "-", "-", "-", "-"),
            }
        }
        s
    }
}

/// Times every ablation configuration on `images` and, when `gt_dir` is
/// given, scores it against the ground truth with the same stems.
pub fn cmd_ablate(images: &[PathBuf], gt_dir: Option<&Path>, reps: usize) -> Result<AblationReport> {
    let loaded = images.iter().map(segio::load_image).collect::<Result<Vec<_>>>()?;
    let gts = match gt_dir {
        Some(dir) => {
            let files = segment_files(dir)?;
            let mut gts = Vec::with_capacity(images.len());
            for p in images {
                match files.get(&stem(p)) {
                    Some(f) => gts.push(Some(segio::read_ground_truth(f)?)),
                    None => {
                        eprintln!("warning: no ground truth for {}", p.display());
                        gts.push(None);
                    }
                }
            }
            Some(gts)
        }
        None => None,
    };
    let reps = reps.max(1);
    let gates = MatchGates::default();
    let mut rows = Vec::new();
    for config in ABLATION_CONFIGS {
        let params = DetectorParams::default().with_ablation(config);
        let mut times = Vec::new();
        let mut counts = Vec::new();
        let mut per_image = Vec::new();
        let mut total = LengthSums::default();
        for (k, img) in loaded.iter().enumerate() {
            let mut segs = detect(img, &params)?;
            for _ in 0..reps {
                let t = Instant::now();
                segs = detect(img, &params)?;
                times.push(ms(t.elapsed()));
            }
            counts.push(segs.len() as f64);
            if let Some(Some(gt)) = gts.as_ref().map(|g| &g[k]) {
                let det: Vec<Segment> = segs.iter().map(|v| v.segment).collect();
                let (prefixes, empty) = evaluate_image(&det, gt, &gates);
                total.add(prefixes.last().unwrap_or(&empty));
                per_image.push((prefixes, empty));
            }
        }
        let metrics = gts.as_ref().map(|_| {
            let mut m = total.metrics();
            let curve = pooled_curve(&per_image);
            m.ap = curve.ap;
            m.bap = curve.bap;
            m
        });
        let (mean_ms, std_ms) = mean_std(&times);
        rows.push(AblationRow {
            label: config.label(),
            config,
            mean_ms,
            std_ms,
            mean_segments: mean_std(&counts).0,
            metrics,
        });
    }
    Ok(AblationReport {
        images: loaded.len(),
        reps,
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageStat {
    pub stage: String,
    pub mean_ms: f64,
    pub std_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub images: usize,
    pub reps: usize,
    pub warmup: usize,
    pub mean_segments: f64,
    /// blur, gradient, anchors, drawing, validation, total; per image.
    pub stages: Vec<StageStat>,
}

impl BenchReport {
    pub fn table(&self) -> String {
        let mut s = format!("{} images x {} runs ({} warm-up)\n", self.images, self.reps, self.warmup);
        for st in &self.stages {
            s += &format!("{:<12} {:>9.3} ms ± {:.3}\n", st.stage, st.mean_ms, st.std_ms);
        }
        s
    }

    pub fn total(&self) -> &StageStat {
        self.stages.last().expect("bench report has stages")
    }
}

/// Times the detector stage by stage on the calling thread. Warm-up runs
/// are not recorded.
pub fn cmd_bench(images: &[PathBuf], params: &DetectorParams, reps: usize, warmup: usize) -> Result<BenchReport> {
    let loaded = images.iter().map(segio::load_image).collect::<Result<Vec<_>>>()?;
    bench_images(&loaded, params, reps, warmup)
}

pub fn bench_images(images: &[GrayImage], params: &DetectorParams, reps: usize, warmup: usize) -> Result<BenchReport> {
    if images.is_empty() {
        return Err(Error::InvalidParameter("bench needs at least one image".into()));
    }
    let reps = reps.max(1);
    let mut runs: Vec<StageTimings> = Vec::new();
    let mut counts = Vec::new();
    for img in images {
        for _ in 0..warmup {
            detect_with_timings(img, params)?;
        }
        for _ in 0..reps {
            let (segs, t) = detect_with_timings(img, params)?;
            counts.push(segs.len() as f64);
            runs.push(t);
        }
    }
    type Stage = (&'static str, fn(&StageTimings) -> Duration);
    let stages: [Stage; 6] = [
        ("blur", |t| t.blur),
        ("gradient", |t| t.gradient),
        ("anchors", |t| t.anchors),
        ("drawing", |t| t.drawing),
        ("validation", |t| t.validation),
        ("total", StageTimings::total),
    ];
    Ok(BenchReport {
        images: images.len(),
        reps,
        warmup,
        mean_segments: mean_std(&counts).0,
        stages: stages
            .iter()
            .map(|(name, get)| {
                let xs: Vec<f64> = runs.iter().map(|t| ms(get(t))).collect();
                let (mean_ms, std_ms) = mean_std(&xs);
                StageStat {
                    stage: (*name).to_string(),
                    mean_ms,
                    std_ms,
                }
            })
            .collect(),
    })
}

/// Evaluates one detection list against ground truth, AP included.
pub fn evaluate(det: &[Segment], gt: &[Segment], gates: &MatchGates) -> EvalMetrics {
    let (prefixes, empty) = evaluate_image(det, gt, gates);
    summarize(&prefixes, &empty)
}
