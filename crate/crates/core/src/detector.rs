//! Detection pipeline: parameters, ablation switches and the `detect` entry
//! point.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::anchors::extract_anchors;
use crate::eed::{eed_from_anchor, DrawState};
use crate::error::{Error, Result};
use crate::imgproc::{compute_gradient, gaussian_blur, GrayImage};
use crate::validate::{validate_segment, ValidatedSegment};

/// Smallest accepted input side.
pub const MIN_IMAGE_SIDE: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorParams {
    pub blur_kernel: usize,
    pub blur_sigma: f64,
    pub t_grad: u16,
    pub t_anchor: u16,
    pub scan_interval: usize,
    /// Consecutive outliers tolerated before a discontinuity is declared.
    pub t_ol: usize,
    pub t_min_length: usize,
    /// Maximum mean squared residual (px^2) to open a segment.
    pub t_line_fit_err: f64,
    pub t_px_to_seg_dist: f64,
    pub t_eigen_ext: f64,
    pub t_angle_ext_deg: f64,
    /// Radians.
    pub t_valid: f64,
    pub jump_lengths: Vec<usize>,
    pub jumps_enabled: bool,
    pub jump_validation_enabled: bool,
    pub segment_validation_enabled: bool,
}

impl Default for DetectorParams {
    fn default() -> Self {
        Self {
            blur_kernel: 5,
            blur_sigma: 1.0,
            t_grad: 30,
            t_anchor: 8,
            scan_interval: 2,
            t_ol: 3,
            t_min_length: 15,
            t_line_fit_err: 0.2,
            t_px_to_seg_dist: 1.5,
            t_eigen_ext: 10.0,
            t_angle_ext_deg: 10.0,
            t_valid: 0.15,
            jump_lengths: vec![5, 7, 9],
            jumps_enabled: true,
            jump_validation_enabled: true,
            segment_validation_enabled: true,
        }
    }
}

impl DetectorParams {
    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.blur_kernel == 0 || self.blur_kernel.is_multiple_of(2) {
            return bad(format!("blur_kernel must be odd, got {}", self.blur_kernel));
        }
        if !(self.blur_sigma > 0.0) {
            return bad(format!("blur_sigma must be positive, got {}", self.blur_sigma));
        }
        if self.scan_interval == 0 {
            return bad("scan_interval must be at least 1".into());
        }
        if self.t_min_length < 2 {
            return bad(format!("t_min_length must be at least 2, got {}", self.t_min_length));
        }
        for (name, v) in [
            ("t_line_fit_err", self.t_line_fit_err),
            ("t_px_to_seg_dist", self.t_px_to_seg_dist),
            ("t_eigen_ext", self.t_eigen_ext),
            ("t_angle_ext_deg", self.t_angle_ext_deg),
            ("t_valid", self.t_valid),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return bad(format!("{name} must be a finite non-negative number, got {v}"));
            }
        }
        if self.jump_lengths.iter().any(|&j| j < 5) {
            return bad(format!("jump lengths must be at least 5, got {:?}", self.jump_lengths));
        }
        if self.jump_lengths.windows(2).any(|w| w[0] >= w[1]) {
            return bad(format!("jump lengths must be strictly ascending, got {:?}", self.jump_lengths));
        }
        Ok(())
    }

    /// Default parameters switched to one ablation configuration.
    pub fn with_ablation(mut self, config: AblationConfig) -> Self {
        match config.jumps {
            JumpMode::None => self.jumps_enabled = false,
            JumpMode::Fixed5 => {
                self.jumps_enabled = true;
                self.jump_lengths = vec![5];
            }
            JumpMode::Multiple => {
                self.jumps_enabled = true;
                self.jump_lengths = vec![5, 7, 9];
            }
        }
        self.jump_validation_enabled = config.jump_validation;
        self.segment_validation_enabled = config.segment_validation;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum JumpMode {
    None,
    Fixed5,
    Multiple,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AblationConfig {
    pub jumps: JumpMode,
    pub jump_validation: bool,
    pub segment_validation: bool,
}

impl AblationConfig {
    pub fn label(&self) -> String {
        let jumps = match self.jumps {
            JumpMode::None => "None",
            JumpMode::Fixed5 => "Fixed(5)",
            JumpMode::Multiple => "Multi(5,7,9)",
        };
        format!(
            "{jumps} / {} / {}",
            if self.jump_validation { "JumpVal" } else { "-" },
            if self.segment_validation { "SegVal" } else { "-" }
        )
    }
}

/// The six configurations of the ablation table, in table order.
pub const ABLATION_CONFIGS: [AblationConfig; 6] = [
    AblationConfig { jumps: JumpMode::None, jump_validation: false, segment_validation: false },
    AblationConfig { jumps: JumpMode::None, jump_validation: false, segment_validation: true },
    AblationConfig { jumps: JumpMode::Fixed5, jump_validation: false, segment_validation: false },
    AblationConfig { jumps: JumpMode::Fixed5, jump_validation: true, segment_validation: false },
    AblationConfig { jumps: JumpMode::Multiple, jump_validation: true, segment_validation: false },
    AblationConfig { jumps: JumpMode::Multiple, jump_validation: true, segment_validation: true },
];

/// Wall-clock time per pipeline stage.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StageTimings {
    pub blur: Duration,
    pub gradient: Duration,
    pub anchors: Duration,
    pub drawing: Duration,
    pub validation: Duration,
}

impl StageTimings {
    pub fn total(&self) -> Duration {
        self.blur + self.gradient + self.anchors + self.drawing + self.validation
    }
}

/// Detects line segments. Returns accepted segments sorted by descending
/// score (length when validation is disabled).
pub fn detect(img: &GrayImage, params: &DetectorParams) -> Result<Vec<ValidatedSegment>> {
    Ok(detect_with_timings(img, params)?.0)
}

/// Like [`detect`], but keeps rejected segments (flagged `accepted = false`).
pub fn detect_all(img: &GrayImage, params: &DetectorParams) -> Result<Vec<ValidatedSegment>> {
    Ok(run(img, params)?.0)
}

pub fn detect_with_timings(img: &GrayImage, params: &DetectorParams) -> Result<(Vec<ValidatedSegment>, StageTimings)> {
    let (mut segs, timings) = run(img, params)?;
    segs.retain(|s| s.accepted);
    Ok((segs, timings))
}

fn run(img: &GrayImage, params: &DetectorParams) -> Result<(Vec<ValidatedSegment>, StageTimings)> {
    params.check()?;
    if img.width() < MIN_IMAGE_SIDE || img.height() < MIN_IMAGE_SIDE {
        return Err(Error::ImageTooSmall {
            width: img.width(),
            height: img.height(),
            min_width: MIN_IMAGE_SIDE,
            min_height: MIN_IMAGE_SIDE,
        });
    }
    let mut timings = StageTimings::default();

    let t = Instant::now();
    let blurred = gaussian_blur(img, params.blur_kernel, params.blur_sigma)?;
    timings.blur = t.elapsed();

    let t = Instant::now();
    let grad = compute_gradient(&blurred, params.t_grad)?;
    timings.gradient = t.elapsed();

    let t = Instant::now();
    let anchors = extract_anchors(&grad, params.t_anchor, params.scan_interval);
    timings.anchors = t.elapsed();

    let t = Instant::now();
    let mut state = DrawState::new(grad.width(), grad.height());
    let mut candidates = Vec::new();
    for anchor in &anchors {
        candidates.extend(eed_from_anchor(anchor, &grad, &mut state, params));
    }
    timings.drawing = t.elapsed();

    let t = Instant::now();
    let mut out: Vec<ValidatedSegment> = candidates
        .iter()
        .map(|c| {
            if params.segment_validation_enabled {
                validate_segment(c, &grad, params.t_valid)
            } else {
                let ((x1, y1), (x2, y2)) = c.endpoints();
                ValidatedSegment::unvalidated(crate::geometry::Segment::from_coords(x1, y1, x2, y2), c.len())
            }
        })
        .collect();
    out.sort_by(|a, b| b.score.total_cmp(&a.score));
    timings.validation = t.elapsed();
    Ok((out, timings))
}
