use serde::{Deserialize, Serialize};

use super::distance::{directed_overlap, directed_union, structural_distance};
use super::hungarian::{solve, CostMatrix};
use crate::geometry::Segment;

/// Feasibility gates for a (detected, ground-truth) pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchGates {
    /// Minimum IoU of the two segments on the ground-truth line.
    pub lambda_overlap: f64,
    /// Maximum angle between the segments, degrees.
    pub lambda_ang: f64,
    /// Maximum distance from the detection midpoint to the ground-truth line.
    pub lambda_dist: f64,
}

impl Default for MatchGates {
    fn default() -> Self {
        Self {
            lambda_overlap: 0.1,
            lambda_ang: 15.0,
            lambda_dist: 2.0 * std::f64::consts::SQRT_2,
        }
    }
}

impl MatchGates {
    /// Gates used for repeatability between two views.
    pub fn repeatability() -> Self {
        Self {
            lambda_overlap: 0.5,
            lambda_dist: 5.0,
            ..Self::default()
        }
    }

    pub fn feasible(&self, det: &Segment, gt: &Segment) -> bool {
        if det.is_degenerate() || gt.is_degenerate() {
            return false;
        }
        let union = directed_union(gt, det);
        let iou = if union > 0.0 { directed_overlap(gt, det) / union } else { 0.0 };
        iou >= self.lambda_overlap
            && det.angle_to(gt).to_degrees() <= self.lambda_ang
            && gt.line_distance(det.midpoint()) <= self.lambda_dist
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    /// `(detected index, ground-truth index, structural distance)`.
    pub pairs: Vec<(usize, usize, f64)>,
    pub unmatched_detected: Vec<usize>,
    pub unmatched_gt: Vec<usize>,
}

impl MatchResult {
    pub fn total_cost(&self) -> f64 {
        self.pairs.iter().map(|p| p.2).sum()
    }
}

/// Gated cost matrix: structural distance where all gates pass.
pub fn cost_matrix(det: &[Segment], gt: &[Segment], gates: &MatchGates) -> CostMatrix {
    CostMatrix::from_fn(det.len(), gt.len(), |i, j| {
        if gates.feasible(&det[i], &gt[j]) {
            structural_distance(&det[i], &gt[j]).ok()
        } else {
            None
        }
    })
}

/// Optimal 1-to-1 matching: the most gate-feasible pairs, and among those
/// the least total structural distance.
pub fn match_segments(det: &[Segment], gt: &[Segment], gates: &MatchGates) -> MatchResult {
    let costs = cost_matrix(det, gt, gates);
    let assignment = solve(&costs);
    let mut det_used = vec![false; det.len()];
    let mut gt_used = vec![false; gt.len()];
    let pairs: Vec<(usize, usize, f64)> = assignment
        .into_iter()
        .map(|(i, j)| {
            det_used[i] = true;
            gt_used[j] = true;
            (i, j, costs.get(i, j).unwrap())
        })
        .collect();
    MatchResult {
        pairs,
        unmatched_detected: (0..det.len()).filter(|&i| !det_used[i]).collect(),
        unmatched_gt: (0..gt.len()).filter(|&j| !gt_used[j]).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(x1: f64, y1: f64, x2: f64, y2: f64) -> Segment {
        Segment::from_coords(x1, y1, x2, y2)
    }

    #[test]
    fn identity_matching() {
        let gt = vec![seg(0.0, 0.0, 50.0, 0.0), seg(0.0, 10.0, 0.0, 60.0), seg(20.0, 20.0, 60.0, 60.0)];
        let m = match_segments(&gt, &gt, &MatchGates::default());
        assert_eq!(m.pairs.iter().map(|p| (p.0, p.1)).collect::<Vec<_>>(), vec![(0, 0), (1, 1), (2, 2)]);
        assert_eq!(m.total_cost(), 0.0);
        assert!(m.unmatched_detected.is_empty() && m.unmatched_gt.is_empty());
    }

    #[test]
    fn gates() {
        let g = MatchGates::default();
        let gt = seg(0.0, 0.0, 100.0, 0.0);
        assert!(g.feasible(&seg(10.0, 2.0, 90.0, 2.0), &gt));
        // Too far from the gt line.
        assert!(!g.feasible(&seg(10.0, 3.0, 90.0, 3.0), &gt));
        // 20 degrees off.
        let t = 20f64.to_radians();
        assert!(!g.feasible(&seg(50.0 - 40.0 * t.cos(), -40.0 * t.sin(), 50.0 + 40.0 * t.cos(), 40.0 * t.sin()), &gt));
        // Overlap IoU 5 / 105 is below 0.1; 15 / 105 is above.
        assert!(!g.feasible(&seg(95.0, 0.0, 105.0, 0.0), &gt));
        assert!(g.feasible(&seg(85.0, 0.0, 105.0, 0.0), &gt));
    }

    #[test]
    fn structural_distance_picks_the_aligned_candidate() {
        // A ground-truth segment and two candidates lying on its line: a long
        // one covering most of it and a short one sitting inside. Point
        // sampling along the gt would favor neither strongly; endpoint
        // distances clearly prefer the long one.
        let gt = vec![seg(0.0, 0.0, 100.0, 0.0)];
        let det = vec![seg(40.0, 1.0, 60.0, 1.0), seg(2.0, 1.0, 97.0, 1.0)];
        let m = match_segments(&det, &gt, &MatchGates::default());
        assert_eq!(m.pairs.len(), 1);
        assert_eq!(m.pairs[0].0, 1);
        assert_eq!(m.unmatched_detected, vec![0]);
    }

    #[test]
    fn empty_inputs() {
        let m = match_segments(&[], &[seg(0.0, 0.0, 1.0, 0.0)], &MatchGates::default());
        assert!(m.pairs.is_empty());
        assert_eq!(m.unmatched_gt, vec![0]);
    }
}
