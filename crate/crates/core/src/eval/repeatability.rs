use serde::{Deserialize, Serialize};

use super::distance::directed_overlap;
use super::homography::{project_segment, Homography};
use super::matching::{match_segments, MatchGates};
use crate::geometry::Segment;

/// Image size, `(width, height)`.
pub type Dims = (usize, usize);

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Repeatability {
    /// Length-based score in `[0, 1]`.
    pub length: f64,
    /// Same ratio computed with segment counts instead of lengths.
    pub count: f64,
    /// Matched pairs in the A frame and in the B frame.
    pub pairs_a: usize,
    pub pairs_b: usize,
    /// Neither view sees any segment of the shared region.
    pub no_shared_region: bool,
}

/// Segments of one view restricted to what the other view sees: mapped to
/// the other image, clipped, and mapped back.
fn restrict(segs: &[Segment], to_other: &Homography, other: Dims, own: Dims) -> Vec<Segment> {
    let back = to_other.inverse();
    segs.iter()
        .filter_map(|s| project_segment(s, to_other, other.0, other.1))
        .filter_map(|s| project_segment(&s, &back, own.0, own.1))
        .collect()
}

/// One directed term: `own` segments against `other` segments projected
/// into the own frame. Returns `(overlap, total length, pairs, count)`.
fn term(own: &[Segment], projected: &[Segment], gates: &MatchGates) -> (f64, f64, usize, usize) {
    let m = match_segments(own, projected, gates);
    let overlap = m.pairs.iter().map(|&(i, j, _)| directed_overlap(&own[i], &projected[j])).sum();
    let total = own.iter().chain(projected).map(Segment::length).sum();
    (overlap, total, m.pairs.len(), own.len() + projected.len())
}

/// Symmetric repeatability of detections `segs_a` (image of size `dims_a`)
/// and `segs_b` (size `dims_b`), where `h_ab` maps B coordinates to A.
///
/// Each view contributes `Σ matched overlap / (Σ own length + Σ projected
/// length)`, computed in its own frame with segments limited to the region
/// both images see. Identical detections score 1. The count variant uses
/// pair and segment counts in place of lengths.
pub fn repeatability(
    segs_a: &[Segment],
    segs_b: &[Segment],
    h_ab: &Homography,
    dims_a: Dims,
    dims_b: Dims,
    gates: &MatchGates,
) -> Repeatability {
    let h_ba = h_ab.inverse();
    let a_own = restrict(segs_a, &h_ba, dims_b, dims_a);
    let b_in_a: Vec<Segment> = segs_b
        .iter()
        .filter_map(|s| project_segment(s, h_ab, dims_a.0, dims_a.1))
        .collect();
    let b_own = restrict(segs_b, h_ab, dims_a, dims_b);
    let a_in_b: Vec<Segment> = segs_a
        .iter()
        .filter_map(|s| project_segment(s, &h_ba, dims_b.0, dims_b.1))
        .collect();

    let (oa, la, pa, na) = term(&a_own, &b_in_a, gates);
    let (ob, lb, pb, nb) = term(&b_own, &a_in_b, gates);
    let ratio = |a: f64, b: f64| if b > 0.0 { a / b } else { 0.0 };
    Repeatability {
        length: ratio(oa, la) + ratio(ob, lb),
        count: ratio(pa as f64, na as f64) + ratio(pb as f64, nb as f64),
        pairs_a: pa,
        pairs_b: pb,
        no_shared_region: la <= 0.0 && lb <= 0.0,
    }
}
