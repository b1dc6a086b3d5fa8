//! Detector evaluation: structural-distance matching under gates,
//! precision/recall/IoU, PR curves with AP/bAP, and repeatability across
//! views related by a homography.

mod distance;
pub mod homography;
pub mod hungarian;
mod matching;
mod metrics;
mod repeatability;

pub use distance::{directed_overlap, directed_union, structural_distance};
pub use homography::{clip_segment, project_segment, Homography};
pub use matching::{cost_matrix, match_segments, MatchGates, MatchResult};
pub use metrics::{
    average_precision, f_score, metrics, pooled_curve, pr_curve, prefix_sums, EvalMetrics, LengthSums, PrCurve,
    PrPoint,
};
pub use repeatability::{repeatability, Dims, Repeatability};
