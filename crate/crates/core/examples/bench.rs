//! Per-stage timings of the detector.
//!
//!     cargo run --release --example bench -- [image] [reps]

use elsed::cli::bench_images;
use elsed::{segio, DetectorParams};

fn main() -> elsed::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/astronaut_640x480.pgm").into());
    let reps = args.next().and_then(|r| r.parse().ok()).unwrap_or(50);
    let img = segio::load_image(&path)?;

    for (name, params) in [
        ("full", DetectorParams::default()),
        (
            "no jumps, no validation",
            DetectorParams {
                jumps_enabled: false,
                segment_validation_enabled: false,
                ..DetectorParams::default()
            },
        ),
    ] {
        let report = bench_images(std::slice::from_ref(&img), &params, reps, 3)?;
        println!("{name} ({:.0} segments)", report.mean_segments);
        print!("{}", report.table());
    }
    Ok(())
}
