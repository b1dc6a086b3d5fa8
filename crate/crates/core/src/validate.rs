//! Gradient-orientation validation of drawn segments.

use serde::{Deserialize, Serialize};

use crate::eed::{Pixel, SegmentCandidate};
use crate::geometry::{Point, Segment};
use crate::imgproc::GradientMap;

/// Pixels closer than this (along the line) to an endpoint or to a jumped
/// gap are not scored.
pub const MARGIN_PX: f64 = 2.0;

/// A scored segment. With validation disabled `score` holds the length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidatedSegment {
    pub segment: Segment,
    pub score: f64,
    pub length: f64,
    pub accepted: bool,
    /// Number of inlier pixels supporting the segment.
    pub support: usize,
}

impl ValidatedSegment {
    /// Pass-through used when validation is off: always accepted, ranked by
    /// length.
    pub fn unvalidated(segment: Segment, support: usize) -> Self {
        let length = segment.length();
        Self {
            segment,
            score: length,
            length,
            accepted: true,
            support,
        }
    }
}

/// Angle between the gradient `(gx, gy)` and the unit `normal`, folded into
/// `[0, pi/2]` so that the gradient sign does not matter.
pub fn angular_error(gx: f64, gy: f64, normal: (f64, f64)) -> f64 {
    let norm = gx.hypot(gy);
    if norm == 0.0 {
        return std::f64::consts::FRAC_PI_2;
    }
    ((gx * normal.0 + gy * normal.1) / norm).abs().min(1.0).acos()
}

/// Fraction of errors strictly below `t_valid`; 0 for an empty slice.
pub fn inlier_score(errors: &[f64], t_valid: f64) -> f64 {
    if errors.is_empty() {
        return 0.0;
    }
    errors.iter().filter(|&&e| e < t_valid).count() as f64 / errors.len() as f64
}

/// Scores `seg` by the fraction of its usable inlier pixels whose gradient
/// lies within `t_valid` radians of the segment normal. Accepted when at
/// least half of them do.
pub fn validate_segment(seg: &SegmentCandidate, grad: &GradientMap, t_valid: f64) -> ValidatedSegment {
    let ((x1, y1), (x2, y2)) = seg.endpoints();
    let segment = Segment::from_coords(x1, y1, x2, y2);
    let errors = segment_errors(&segment, &seg.pixels, &seg.jumped, grad);
    let score = inlier_score(&errors, t_valid);
    ValidatedSegment {
        segment,
        score,
        length: segment.length(),
        accepted: score >= 0.5,
        support: seg.pixels.len(),
    }
}

/// Angular errors of the usable pixels of `pixels` against `segment`.
pub fn segment_errors(segment: &Segment, pixels: &[Pixel], jumped: &[Pixel], grad: &GradientMap) -> Vec<f64> {
    if segment.is_degenerate() {
        return Vec::new();
    }
    let len = segment.length();
    let at = |p: &Pixel| segment.param(Point::new(p.x as f64, p.y as f64));
    let mut gaps: Vec<f64> = jumped.iter().map(at).collect();
    gaps.sort_by(f64::total_cmp);
    let near_gap = |t: f64| {
        let i = gaps.partition_point(|&g| g < t);
        (i < gaps.len() && gaps[i] - t < MARGIN_PX) || (i > 0 && t - gaps[i - 1] < MARGIN_PX)
    };
    let normal = segment.normal();
    pixels
        .iter()
        .filter(|p| {
            let t = at(p);
            t >= MARGIN_PX && len - t >= MARGIN_PX && !near_gap(t)
        })
        .map(|p| {
            let gx = grad.gx(p.x as usize, p.y as usize) as f64;
            let gy = grad.gy(p.x as usize, p.y as usize) as f64;
            angular_error(gx, gy, normal)
        })
        .collect()
}
