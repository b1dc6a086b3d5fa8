//! End-to-end runs of the `elsed` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use elsed::detector::ABLATION_CONFIGS;
use elsed::segio::{self, SegmentRecord};
use elsed::synth::{polygon_scene, t_junction};
use elsed::{detect, DetectorParams, GrayImage};
use serde_json::Value;

fn elsed(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elsed"))
        .args(args)
        .current_dir(dir)
        .env("ELSED_THREADS", "2")
        .output()
        .expect("run elsed")
}

fn ok(out: &Output) {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn detect_t_junction_writes_two_segments() {
    let dir = tempfile::tempdir().unwrap();
    segio::save_pgm(dir.path().join("t.pgm"), &t_junction(120).0).unwrap();
    let out = elsed(&["detect", "t.pgm", "-o", "t.csv", "--overlay", "t.png"], dir.path());
    ok(&out);
    assert_eq!(segio::read_segments(dir.path().join("t.csv")).unwrap().len(), 2);
    assert!(segio::load_image(dir.path().join("t.png")).is_ok());
}

#[test]
fn detect_constant_image_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    segio::save_pgm(dir.path().join("c.pgm"), &GrayImage::filled(64, 64, 90).unwrap()).unwrap();
    let out = elsed(&["detect", "c.pgm", "-o", "c.jsonl"], dir.path());
    ok(&out);
    assert!(segio::read_segments(dir.path().join("c.jsonl")).unwrap().is_empty());
}

#[test]
fn detect_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    segio::save_pgm(dir.path().join("t.pgm"), &t_junction(120).0).unwrap();
    let out = elsed(&["detect", "t.pgm"], dir.path());
    ok(&out);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("x1,y1,x2,y2,score"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn flags_match_the_bare_ablation_row() {
    let dir = tempfile::tempdir().unwrap();
    let img = polygon_scene(320, 240, 0.0, 0.0);
    segio::save_pgm(dir.path().join("p.pgm"), &img).unwrap();
    ok(&elsed(&["detect", "p.pgm", "-o", "p.csv", "--no-jumps", "--no-validation"], dir.path()));
    let params = DetectorParams::default().with_ablation(ABLATION_CONFIGS[0]);
    let want: Vec<SegmentRecord> = detect(&img, &params).unwrap().iter().map(SegmentRecord::from).collect();
    let got = segio::read_segments(dir.path().join("p.csv")).unwrap();
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(&want) {
        assert!((g.x1 - w.x1).abs() < 1e-6 && (g.y2 - w.y2).abs() < 1e-6 && (g.score - w.score).abs() < 1e-6);
    }
}

#[test]
fn errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    segio::save_pgm(dir.path().join("s.pgm"), &GrayImage::filled(8, 8, 0).unwrap()).unwrap();
    let out = elsed(&["detect", "s.pgm"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("smaller"));
    assert!(!elsed(&["detect", "missing.pgm"], dir.path()).status.success());
    assert!(!elsed(&["detect", "s.pgm", "--jump-lengths", "9,5"], dir.path()).status.success());
}

fn write(dir: &Path, name: &str, segs: &[[f64; 4]]) {
    let recs: Vec<SegmentRecord> = segs
        .iter()
        .map(|s| SegmentRecord {
            x1: s[0],
            y1: s[1],
            x2: s[2],
            y2: s[3],
            score: 1.0,
        })
        .collect();
    segio::write_segments(dir.join(name), &recs).unwrap();
}

#[test]
fn eval_reports() {
    let root = tempfile::tempdir().unwrap();
    let [gt, same, half, _empty] = ["gt", "same", "half", "empty"].map(|d| {
        let p = root.path().join(d);
        fs::create_dir(&p).unwrap();
        p
    });
    let lines = [[0.0, 0.0, 100.0, 0.0], [0.0, 20.0, 0.0, 80.0]];
    write(&gt, "a.csv", &lines);
    write(&gt, "b.csv", &lines[..1]);
    write(&same, "a.csv", &lines);
    write(&same, "b.jsonl", &lines[..1]);
    write(&same, "extra.csv", &lines[..1]);
    write(&half, "a.csv", &[[0.0, 0.0, 50.0, 0.0], [0.0, 20.0, 0.0, 50.0]]);
    write(&half, "b.csv", &[[50.0, 0.0, 100.0, 0.0]]);

    let out = elsed(&["eval", "--det", "same", "--gt", "gt", "--json", "r.json"], root.path());
    ok(&out);
    assert!(String::from_utf8_lossy(&out.stderr).contains("extra"));
    let r = json(&root.path().join("r.json"));
    for key in ["precision", "recall", "iou", "f_score", "ap", "bap"] {
        assert_eq!(r["pooled"][key], 1.0, "{key}");
    }
    assert_eq!(r["missing_ground_truth"][0], "extra");

    ok(&elsed(&["eval", "--det", "empty", "--gt", "gt", "--json", "e.json"], root.path()));
    let r = json(&root.path().join("e.json"));
    assert_eq!((r["pooled"]["precision"].as_f64(), r["pooled"]["recall"].as_f64()), (Some(0.0), Some(0.0)));
    assert_eq!(r["missing_detections"].as_array().unwrap().len(), 2);

    ok(&elsed(&["eval", "--det", "half", "--gt", "gt", "--json", "h.json"], root.path()));
    let r = json(&root.path().join("h.json"));
    assert!((r["pooled"]["recall"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert_eq!(r["pooled"]["precision"], 1.0);
}

#[test]
fn repeatability_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    segio::save_pgm(d.join("a.pgm"), &polygon_scene(320, 240, 0.0, 0.0)).unwrap();
    segio::save_pgm(d.join("b.pgm"), &polygon_scene(320, 240, 10.0, 0.0)).unwrap();
    segio::save_pgm(d.join("flat.pgm"), &GrayImage::filled(320, 240, 128).unwrap()).unwrap();
    fs::write(d.join("id.txt"), "1 0 0\n0 1 0\n0 0 1\n").unwrap();
    fs::write(d.join("shift.txt"), "1 0 10\n0 1 0\n0 0 1\n").unwrap();
    fs::write(
        d.join("pairs.csv"),
        "image_a,image_b,homography\na.pgm,a.pgm,id.txt\na.pgm,b.pgm,shift.txt\na.pgm,flat.pgm,id.txt\na.pgm,b.pgm,nope.txt\n",
    )
    .unwrap();
    let out = elsed(&["repeatability", "pairs.csv", "--json", "r.json"], d);
    ok(&out);
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.txt"));
    let r = json(&d.join("r.json"));
    let pairs = r["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 3);
    assert!((pairs[0]["length"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!(pairs[1]["length"].as_f64().unwrap() >= 0.9);
    assert!(pairs[2]["length"].as_f64().unwrap() < 0.05);
    assert_eq!(r["skipped"].as_array().unwrap().len(), 1);
}

#[test]
fn bench_and_ablate() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    segio::save_pgm(d.join("p.pgm"), &polygon_scene(320, 240, 0.0, 0.0)).unwrap();
    ok(&elsed(&["bench", "p.pgm", "--reps", "3", "--warmup", "1", "--json", "b.json"], d));
    let b = json(&d.join("b.json"));
    let stages: Vec<&str> = b["stages"].as_array().unwrap().iter().map(|s| s["stage"].as_str().unwrap()).collect();
    assert_eq!(stages, ["blur", "gradient", "anchors", "drawing", "validation", "total"]);

    ok(&elsed(&["ablate", ".", "--reps", "1", "--json", "a.json"], d));
    let a = json(&d.join("a.json"));
    let rows = a["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[0]["label"], "None / - / -");
    assert_eq!(rows[5]["label"], "Multi(5,7,9) / JumpVal / SegVal");
}
