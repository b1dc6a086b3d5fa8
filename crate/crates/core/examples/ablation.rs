//! The six jump/validation configurations on one image: time and segment
//! count per configuration.
//!
//!     cargo run --release --example ablation -- [image]

use std::time::Instant;

use elsed::detector::ABLATION_CONFIGS;
use elsed::{detect, segio, DetectorParams};

fn main() -> elsed::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/astronaut_640x480.pgm").into());
    let img = segio::load_image(&path)?;
    let reps = 20;
    println!("{:<34} {:>9} {:>6}", "configuration", "ms", "segs");
    for config in ABLATION_CONFIGS {
        let params = DetectorParams::default().with_ablation(config);
        let mut n = detect(&img, &params)?.len();
        let t = Instant::now();
        for _ in 0..reps {
            n = detect(&img, &params)?.len();
        }
        let ms = t.elapsed().as_secs_f64() * 1e3 / reps as f64;
        println!("{:<34} {:>9.2} {:>6}", config.label(), ms, n);
    }
    Ok(())
}
