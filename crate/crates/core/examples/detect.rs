//! Detect segments in an image and save them with an overlay.
//!
//!     cargo run --release --example detect -- [image.pgm|png] [out_dir]
//!
//! Without arguments the bundled 640x480 test image is used.

use std::path::PathBuf;

use elsed::segio::{self, SegmentRecord};
use elsed::{detect, DetectorParams, Segment};

fn main() -> elsed::Result<()> {
    let mut args = std::env::args().skip(1);
    let input = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/astronaut_640x480.pgm")));
    let out_dir = args.next().map(PathBuf::from).unwrap_or_else(std::env::temp_dir);

    let img = segio::load_image(&input)?;
    let segs = detect(&img, &DetectorParams::default())?;
    println!("{} segments in {}x{} image", segs.len(), img.width(), img.height());
    for s in segs.iter().take(5) {
        println!(
            "  ({:7.2}, {:7.2}) -> ({:7.2}, {:7.2})  length {:6.1}  score {:.3}",
            s.segment.a.x, s.segment.a.y, s.segment.b.x, s.segment.b.y, s.length, s.score
        );
    }

    let csv = out_dir.join("segments.csv");
    let png = out_dir.join("segments.png");
    segio::write_segments(&csv, &segs.iter().map(SegmentRecord::from).collect::<Vec<_>>())?;
    segio::save_overlay(&png, &img, &segs.iter().map(|s| s.segment).collect::<Vec<Segment>>())?;
    println!("wrote {} and {}", csv.display(), png.display());
    Ok(())
}
