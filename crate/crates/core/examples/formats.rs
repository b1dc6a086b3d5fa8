//! File formats: segment lists in CSV and JSON lines, homography text files,
//! PGM and PNG images.

use elsed::eval::Homography;
use elsed::segio::{self, SegmentRecord};
use elsed::synth::single_edge;

fn main() -> elsed::Result<()> {
    let dir = std::env::temp_dir().join("elsed-formats");
    std::fs::create_dir_all(&dir).map_err(|e| elsed::Error::InvalidParameter(e.to_string()))?;

    let (img, gt) = single_edge(15.0);
    segio::save_pgm(dir.join("edge.pgm"), &img)?;
    segio::save_png(dir.join("edge.png"), &img)?;
    assert_eq!(segio::load_image(dir.join("edge.png"))?, segio::load_image(dir.join("edge.pgm"))?);

    let recs = vec![SegmentRecord {
        x1: gt.a.x,
        y1: gt.a.y,
        x2: gt.b.x,
        y2: gt.b.y,
        score: 1.0,
    }];
    for name in ["gt.csv", "gt.jsonl"] {
        let p = dir.join(name);
        segio::write_segments(&p, &recs)?;
        println!("{}:\n{}", p.display(), std::fs::read_to_string(&p).unwrap_or_default());
    }
    println!("ground truth read back: {:?}", segio::read_ground_truth(dir.join("gt.csv"))?);

    let h = dir.join("H_a_b.txt");
    segio::save_homography(&h, &Homography::translation(10.0, 0.0))?;
    println!("homography: {:?}", segio::load_homography(&h)?.matrix());
    Ok(())
}
