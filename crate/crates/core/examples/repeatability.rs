//! Repeatability between two renders of the same scene related by a known
//! homography (here a 10 px translation).

use elsed::eval::{repeatability, Homography, MatchGates};
use elsed::synth::polygon_scene;
use elsed::{detect, DetectorParams, GrayImage, Segment};

fn segments(img: &GrayImage) -> elsed::Result<Vec<Segment>> {
    Ok(detect(img, &DetectorParams::default())?.iter().map(|s| s.segment).collect())
}

fn main() -> elsed::Result<()> {
    let (w, h) = (320, 240);
    let a = polygon_scene(w, h, 0.0, 0.0);
    let b = polygon_scene(w, h, 10.0, 0.0);
    let (sa, sb) = (segments(&a)?, segments(&b)?);
    // Maps B coordinates to A.
    let h_ba = Homography::translation(-10.0, 0.0);
    let gates = MatchGates::repeatability();

    let same = repeatability(&sa, &sa, &Homography::identity(), (w, h), (w, h), &gates);
    println!("identical detections: length {:.4}  count {:.4}", same.length, same.count);

    let r = repeatability(&sa, &sb, &h_ba, (w, h), (w, h), &gates);
    println!(
        "10 px shift: {} vs {} segments, length {:.4}  count {:.4}",
        sa.len(),
        sb.len(),
        r.length,
        r.count
    );
    Ok(())
}
