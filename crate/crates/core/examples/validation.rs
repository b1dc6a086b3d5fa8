//! Segment validation on pure noise: most raw candidates found in random
//! intensities have gradients that disagree with their normal and are
//! rejected.

use elsed::synth::uniform_noise;
use elsed::{detect_all, DetectorParams};

fn main() -> elsed::Result<()> {
    let params = DetectorParams::default();
    let (mut total, mut accepted) = (0, 0);
    for seed in 0..20 {
        let img = uniform_noise(320, 240, seed);
        let segs = detect_all(&img, &params)?;
        total += segs.len();
        accepted += segs.iter().filter(|s| s.accepted).count();
    }
    println!("20 noise images: {total} candidates, {accepted} accepted");
    if total > 0 {
        println!("rejected {:.1}%", 100.0 * (total - accepted) as f64 / total as f64);
    }

    let img = elsed::synth::single_edge(30.0).0;
    for s in detect_all(&img, &params)? {
        println!("real edge: score {:.3}, accepted {}", s.score, s.accepted);
    }
    Ok(())
}
