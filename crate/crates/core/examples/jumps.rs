//! Crossing small discontinuities: a step edge interrupted by a gray block
//! is found as one segment with jumps on and as two with jumps off, while a
//! T-junction keeps its two edges apart.

use elsed::synth::{broken_edge, t_junction};
use elsed::{detect, DetectorParams};

fn show(name: &str, segs: &[elsed::ValidatedSegment]) {
    println!("{name}: {} segment(s)", segs.len());
    for s in segs {
        println!(
            "    ({:6.1}, {:6.1}) -> ({:6.1}, {:6.1})",
            s.segment.a.x, s.segment.a.y, s.segment.b.x, s.segment.b.y
        );
    }
}

fn main() -> elsed::Result<()> {
    let with_jumps = DetectorParams::default();
    let without = DetectorParams {
        jumps_enabled: false,
        ..DetectorParams::default()
    };

    let (img, gt) = broken_edge(6);
    println!("edge {:?} -> {:?} with a 6 px gap", gt.a, gt.b);
    show("  jumps 5,7,9", &detect(&img, &with_jumps)?);
    show("  no jumps   ", &detect(&img, &without)?);

    let (img, _) = t_junction(120);
    show("T-junction  ", &detect(&img, &with_jumps)?);
    Ok(())
}
