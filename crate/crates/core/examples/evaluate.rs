//! Scoring detections against ground truth: optimal matching, P/R/IoU/F and
//! the PR curve with AP and bAP.

use elsed::eval::{match_segments, metrics, pr_curve, MatchGates};
use elsed::synth::{single_edge, t_junction};
use elsed::{detect, DetectorParams, Segment};

fn report(name: &str, det: &[Segment], gt: &[Segment]) {
    let gates = MatchGates::default();
    let m = match_segments(det, gt, &gates);
    let e = metrics(&m, det, gt);
    let curve = pr_curve(det, gt, &gates);
    println!(
        "{name:<14} det {:2} gt {:2} matched {:2}  P {:.3} R {:.3} IoU {:.3} F {:.3} AP {:.3} bAP {:.3}",
        det.len(),
        gt.len(),
        m.pairs.len(),
        e.precision,
        e.recall,
        e.iou,
        e.f_score,
        curve.ap,
        curve.bap
    );
}

fn main() -> elsed::Result<()> {
    let params = DetectorParams::default();
    for angle in [0.0, 30.0, 60.0] {
        let (img, gt) = single_edge(angle);
        let det: Vec<Segment> = detect(&img, &params)?.iter().map(|s| s.segment).collect();
        report(&format!("edge {angle:>2}°"), &det, &[gt]);
    }

    let (img, gt) = t_junction(120);
    let det: Vec<Segment> = detect(&img, &params)?.iter().map(|s| s.segment).collect();
    report("T-junction", &det, &gt);

    // Half of a ground-truth segment detected: precision 1, recall 0.5.
    let gt = [Segment::from_coords(0.0, 0.0, 100.0, 0.0)];
    report("half coverage", &[Segment::from_coords(0.0, 0.0, 50.0, 0.0)], &gt);
    Ok(())
}
