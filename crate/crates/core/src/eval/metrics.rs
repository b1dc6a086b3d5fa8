use serde::{Deserialize, Serialize};

use super::distance::{directed_overlap, directed_union};
use super::matching::{match_segments, MatchGates, MatchResult};
use crate::geometry::Segment;

/// Length sums behind precision, recall and IoU. Sums from several images
/// add up to dataset-level (pooled) metrics.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LengthSums {
    /// Σ over pairs of `det ∩_det gt`.
    pub det_overlap: f64,
    /// Σ over pairs of `gt ∩_gt det`.
    pub gt_overlap: f64,
    /// Σ over pairs of `gt ∪_gt det`.
    pub gt_union: f64,
    pub det_length: f64,
    pub gt_length: f64,
}

impl LengthSums {
    pub fn from_match(m: &MatchResult, det: &[Segment], gt: &[Segment]) -> Self {
        let mut s = LengthSums {
            det_length: det.iter().map(Segment::length).sum(),
            gt_length: gt.iter().map(Segment::length).sum(),
            ..Default::default()
        };
        for &(i, j, _) in &m.pairs {
            s.det_overlap += directed_overlap(&det[i], &gt[j]);
            s.gt_overlap += directed_overlap(&gt[j], &det[i]);
            s.gt_union += directed_union(&gt[j], &det[i]);
        }
        s
    }

    pub fn add(&mut self, o: &LengthSums) {
        self.det_overlap += o.det_overlap;
        self.gt_overlap += o.gt_overlap;
        self.gt_union += o.gt_union;
        self.det_length += o.det_length;
        self.gt_length += o.gt_length;
    }

    pub fn metrics(&self) -> EvalMetrics {
        let ratio = |a: f64, b: f64| if b > 0.0 { a / b } else { 0.0 };
        let precision = ratio(self.det_overlap, self.det_length);
        let recall = ratio(self.gt_overlap, self.gt_length);
        EvalMetrics {
            precision,
            recall,
            iou: ratio(self.gt_overlap, self.gt_union),
            f_score: f_score(precision, recall),
            ap: 0.0,
            bap: 0.0,
            recall_undefined: self.gt_length <= 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalMetrics {
    pub precision: f64,
    pub recall: f64,
    pub iou: f64,
    pub f_score: f64,
    pub ap: f64,
    pub bap: f64,
    /// Ground truth was empty; recall is reported as 0.
    pub recall_undefined: bool,
}

pub fn f_score(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

/// Precision, recall and IoU of one matching. AP fields are left at 0; see
/// [`pr_curve`].
pub fn metrics(m: &MatchResult, det: &[Segment], gt: &[Segment]) -> EvalMetrics {
    LengthSums::from_match(m, det, gt).metrics()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PrPoint {
    pub precision: f64,
    pub recall: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PrCurve {
    /// One point per detection prefix, in sweep order.
    pub points: Vec<PrPoint>,
    pub ap: f64,
    pub bap: f64,
}

impl PrCurve {
    pub fn from_points(points: Vec<PrPoint>) -> Self {
        let (ap, bap) = average_precision(&points);
        Self { points, ap, bap }
    }
}

/// Trapezoidal area under precision over recall, starting at recall 0 with
/// the first point's precision, in sweep order. Returns `(AP, AP / R_max)`.
pub fn average_precision(points: &[PrPoint]) -> (f64, f64) {
    let Some(first) = points.first() else {
        return (0.0, 0.0);
    };
    let mut area = 0.0;
    let mut prev = PrPoint {
        precision: first.precision,
        recall: 0.0,
    };
    let mut r_max: f64 = 0.0;
    for p in points {
        area += (p.recall - prev.recall) * 0.5 * (p.precision + prev.precision);
        r_max = r_max.max(p.recall);
        prev = *p;
    }
    let bap = if r_max > 0.0 { area / r_max } else { 0.0 };
    (area, bap)
}

/// Length sums for every prefix `det[..k]`, `k = 1..=det.len()`. `det` must
/// be sorted by descending score.
pub fn prefix_sums(det: &[Segment], gt: &[Segment], gates: &MatchGates) -> Vec<LengthSums> {
    (1..=det.len())
        .map(|k| {
            let m = match_segments(&det[..k], gt, gates);
            LengthSums::from_match(&m, &det[..k], gt)
        })
        .collect()
}

/// PR curve over detection prefixes of one image.
pub fn pr_curve(det: &[Segment], gt: &[Segment], gates: &MatchGates) -> PrCurve {
    PrCurve::from_points(
        prefix_sums(det, gt, gates)
            .iter()
            .map(|s| {
                let m = s.metrics();
                PrPoint {
                    precision: m.precision,
                    recall: m.recall,
                }
            })
            .collect(),
    )
}

/// Dataset curve: point `k` pools, over all images, the sums of each image's
/// top-`k` prefix (all of it when the image has fewer detections).
pub fn pooled_curve(per_image: &[(Vec<LengthSums>, LengthSums)]) -> PrCurve {
    let k_max = per_image.iter().map(|(p, _)| p.len()).max().unwrap_or(0);
    let points = (1..=k_max)
        .map(|k| {
            let mut total = LengthSums::default();
            for (prefixes, empty) in per_image {
                total.add(prefixes.get(k - 1).or(prefixes.last()).unwrap_or(empty));
            }
            let m = total.metrics();
            PrPoint {
                precision: m.precision,
                recall: m.recall,
            }
        })
        .collect();
    PrCurve::from_points(points)
}
