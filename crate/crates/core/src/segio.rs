//! Reading and writing images, segment lists, ground truth and homographies.
//!
//! Images are binary PGM (`P5`, maxval 255) or 8-bit PNG. Segment files are
//! CSV with the header `x1,y1,x2,y2,score`, or JSON lines with the same keys;
//! the extension (`.csv`, `.jsonl`/`.ndjson`) selects the format. Values are
//! written with 6 decimals. Readers reject malformed or out-of-range data
//! instead of coercing it.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::eed::{bresenham, Pixel};
use crate::error::{Error, Result};
use crate::eval::Homography;
use crate::geometry::Segment;
use crate::imgproc::GrayImage;
use crate::validate::ValidatedSegment;

const CSV_HEADER: [&str; 5] = ["x1", "y1", "x2", "y2", "score"];

/// One row of a segment file.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentRecord {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
    /// Validation score, or the segment length when validation is off.
    pub score: f64,
}

impl SegmentRecord {
    pub fn segment(&self) -> Segment {
        Segment::from_coords(self.x1, self.y1, self.x2, self.y2)
    }

    fn check(&self) -> std::result::Result<(), String> {
        let coords = [self.x1, self.y1, self.x2, self.y2];
        if coords.iter().any(|v| !v.is_finite()) {
            return Err("non-finite coordinate".into());
        }
        if !self.score.is_finite() || self.score < 0.0 {
            return Err(format!("score {} out of range", self.score));
        }
        Ok(())
    }
}

impl From<&ValidatedSegment> for SegmentRecord {
    fn from(v: &ValidatedSegment) -> Self {
        let s = v.segment;
        Self {
            x1: s.a.x,
            y1: s.a.y,
            x2: s.b.x,
            y2: s.b.y,
            score: v.score,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SegmentFormat {
    Csv,
    JsonLines,
}

fn segment_format(path: &Path) -> Result<SegmentFormat> {
    match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
        Some("csv") => Ok(SegmentFormat::Csv),
        Some("jsonl") | Some("ndjson") => Ok(SegmentFormat::JsonLines),
        _ => Err(Error::UnsupportedFormat(format!(
            "{}: segment files must end in .csv or .jsonl",
            path.display()
        ))),
    }
}

/// Writes `records` to `path`, in CSV or JSON lines depending on the extension.
pub fn write_segments(path: impl AsRef<Path>, records: &[SegmentRecord]) -> Result<()> {
    let path = path.as_ref();
    let format = segment_format(path)?;
    for (i, r) in records.iter().enumerate() {
        r.check().map_err(|m| Error::InvalidParameter(format!("record {i}: {m}")))?;
    }
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| Error::io(path, e);
    if format == SegmentFormat::Csv {
        writeln!(w, "{}", CSV_HEADER.join(",")).map_err(io)?;
    }
    for r in records {
        match format {
            SegmentFormat::Csv => writeln!(w, "{:.6},{:.6},{:.6},{:.6},{:.6}", r.x1, r.y1, r.x2, r.y2, r.score),
            SegmentFormat::JsonLines => writeln!(
                w,
                r#"{{"x1":{:.6},"y1":{:.6},"x2":{:.6},"y2":{:.6},"score":{:.6}}}"#,
                r.x1, r.y1, r.x2, r.y2, r.score
            ),
        }
        .map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Row as read from disk; `score` may be missing in ground-truth files.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    x1: f64,
    y1: f64,
    x2: f64,
    y2: f64,
    score: Option<f64>,
}

fn read_raw(path: &Path, score_required: bool) -> Result<Vec<(usize, RawRecord)>> {
    let format = segment_format(path)?;
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    match format {
        SegmentFormat::Csv => {
            let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
            let headers = rdr.headers().map_err(|e| Error::parse(path, 1, e.to_string()))?.clone();
            let names: Vec<&str> = headers.iter().collect();
            let ok = names == CSV_HEADER || (!score_required && names == CSV_HEADER[..4]);
            if !ok && !(names.len() <= 1 && names.first().is_none_or(|h| h.is_empty())) {
                return Err(Error::parse(path, 1, format!("expected header {}", CSV_HEADER.join(","))));
            }
            for rec in rdr.records() {
                let rec = rec.map_err(|e| {
                    let line = e.position().map_or(0, |p| p.line() as usize);
                    Error::parse(path, line, e.to_string())
                })?;
                let line = rec.position().map_or(0, |p| p.line() as usize);
                let raw: RawRecord = rec
                    .deserialize(Some(&headers))
                    .map_err(|e| Error::parse(path, line, e.to_string()))?;
                rows.push((line, raw));
            }
        }
        SegmentFormat::JsonLines => {
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let rec: RawRecord = serde_json::from_str(line).map_err(|e| Error::parse(path, i + 1, e.to_string()))?;
                rows.push((i + 1, rec));
            }
        }
    }
    finish(path, rows, score_required)
}

fn finish(path: &Path, rows: Vec<(usize, RawRecord)>, score_required: bool) -> Result<Vec<(usize, RawRecord)>> {
    for (line, r) in &rows {
        if score_required && r.score.is_none() {
            return Err(Error::parse(path, *line, "missing score"));
        }
        let rec = SegmentRecord {
            x1: r.x1,
            y1: r.y1,
            x2: r.x2,
            y2: r.y2,
            score: r.score.unwrap_or(0.0),
        };
        rec.check().map_err(|m| Error::parse(path, *line, m))?;
    }
    Ok(rows)
}

/// Reads a segment file written by [`write_segments`] (or by hand).
pub fn read_segments(path: impl AsRef<Path>) -> Result<Vec<SegmentRecord>> {
    let rows = read_raw(path.as_ref(), true)?;
    Ok(rows
        .into_iter()
        .map(|(_, r)| SegmentRecord {
            x1: r.x1,
            y1: r.y1,
            x2: r.x2,
            y2: r.y2,
            score: r.score.unwrap_or(0.0),
        })
        .collect())
}

/// Source of ground-truth segments for one image. Dataset-specific
/// annotation formats implement this.
pub trait GroundTruthReader {
    fn read(&self, path: &Path) -> Result<Vec<Segment>>;
}

/// Ground truth in the segment file schema; the score column is optional
/// and ignored.
#[derive(Clone, Copy, Debug, Default)]
pub struct SegmentFileGroundTruth;

impl GroundTruthReader for SegmentFileGroundTruth {
    fn read(&self, path: &Path) -> Result<Vec<Segment>> {
        Ok(read_raw(path, false)?
            .into_iter()
            .map(|(_, r)| Segment::from_coords(r.x1, r.y1, r.x2, r.y2))
            .collect())
    }
}

/// Reads ground truth with the default segment file schema.
pub fn read_ground_truth(path: impl AsRef<Path>) -> Result<Vec<Segment>> {
    SegmentFileGroundTruth.read(path.as_ref())
}

/// One image of an evaluation dataset.
#[derive(Clone, Debug)]
pub struct DatasetEntry {
    pub image: PathBuf,
    pub ground_truth: Vec<Segment>,
    /// Second view of the same scene and the homography file mapping it
    /// onto `image`.
    pub pair: Option<(PathBuf, PathBuf)>,
}

impl DatasetEntry {
    pub fn load(
        image: impl Into<PathBuf>,
        gt_path: &Path,
        reader: &dyn GroundTruthReader,
        pair: Option<(PathBuf, PathBuf)>,
    ) -> Result<Self> {
        let image = image.into();
        let mut required = vec![image.as_path()];
        if let Some((b, h)) = &pair {
            required.push(b);
            required.push(h);
        }
        for p in required {
            if !p.is_file() {
                return Err(Error::io(p, std::io::Error::new(std::io::ErrorKind::NotFound, "file not found")));
            }
        }
        Ok(Self {
            image,
            ground_truth: reader.read(gt_path)?,
            pair,
        })
    }
}

/// Reads a homography stored as 9 whitespace-separated reals in row-major
/// order. The result is normalized so that `h[2][2] == 1`.
pub fn load_homography(path: impl AsRef<Path>) -> Result<Homography> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut values = Vec::with_capacity(9);
    for (i, line) in text.lines().enumerate() {
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::parse(path, i + 1, format!("not a number: {tok:?}")))?;
            if !v.is_finite() {
                return Err(Error::parse(path, i + 1, format!("non-finite value {tok:?}")));
            }
            values.push(v);
        }
    }
    if values.len() != 9 {
        return Err(Error::parse(path, text.lines().count().max(1), format!("expected 9 values, found {}", values.len())));
    }
    let mut m = [[0.0; 3]; 3];
    for (k, v) in values.into_iter().enumerate() {
        m[k / 3][k % 3] = v;
    }
    Homography::new(m)
}

/// Writes a homography in the format read by [`load_homography`].
pub fn save_homography(path: impl AsRef<Path>, h: &Homography) -> Result<()> {
    let path = path.as_ref();
    let text: String = h
        .matrix()
        .iter()
        .map(|r| format!("{} {} {}\n", r[0], r[1], r[2]))
        .collect();
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Integer luma: `(299 R + 587 G + 114 B + 500) / 1000`.
pub fn luma(r: u8, g: u8, b: u8) -> u8 {
    ((299 * r as u32 + 587 * g as u32 + 114 * b as u32 + 500) / 1000) as u8
}

/// Loads a PGM (`P5`) or PNG image, picked by content rather than extension.
pub fn load_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_image(&bytes)
}

/// Decodes PGM or PNG bytes.
pub fn decode_image(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.starts_with(b"P5") {
        decode_pgm(bytes)
    } else if bytes.starts_with(b"\x89PNG") {
        decode_png(bytes)
    } else if bytes.len() < 4 {
        Err(Error::TruncatedImage("file too short to identify".into()))
    } else {
        Err(Error::UnsupportedFormat("expected binary PGM (P5) or PNG".into()))
    }
}

fn decode_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in &mut fields {
        // Whitespace and comments up to the next token.
        loop {
            match bytes.get(pos) {
                Some(c) if c.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&c| c != b'\n') {
                        pos += 1;
                    }
                }
                Some(_) => break,
                None => return Err(Error::TruncatedImage("PGM header ends early".into())),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(Error::TruncatedImage("malformed PGM header".into()));
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::TruncatedImage("PGM header value out of range".into()))?;
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(Error::UnsupportedFormat(format!("PGM maxval {maxval}, only 255 is supported")));
    }
    // Exactly one whitespace byte separates the header from the raster.
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::TruncatedImage("PGM header ends early".into()));
    }
    pos += 1;
    let n = width
        .checked_mul(height)
        .ok_or_else(|| Error::TruncatedImage("PGM dimensions overflow".into()))?;
    let raster = &bytes[pos..];
    if raster.len() < n {
        return Err(Error::TruncatedImage(format!("PGM raster has {} of {n} bytes", raster.len())));
    }
    GrayImage::new(width, height, raster[..n].to_vec())
}

fn decode_png(bytes: &[u8]) -> Result<GrayImage> {
    use image::{DynamicImage, ImageError, ImageFormat};
    let img = image::load_from_memory_with_format(bytes, ImageFormat::Png).map_err(|e| match e {
        ImageError::Unsupported(u) => Error::UnsupportedFormat(u.to_string()),
        other => Error::TruncatedImage(other.to_string()),
    })?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    match img {
        DynamicImage::ImageLuma8(g) => GrayImage::new(w, h, g.into_raw()),
        DynamicImage::ImageRgb8(rgb) => GrayImage::new(w, h, rgb.pixels().map(|p| luma(p[0], p[1], p[2])).collect()),
        DynamicImage::ImageRgba8(rgba) if rgba.pixels().all(|p| p[3] == 255) => {
            GrayImage::new(w, h, rgba.pixels().map(|p| luma(p[0], p[1], p[2])).collect())
        }
        DynamicImage::ImageLumaA8(la) if la.pixels().all(|p| p[1] == 255) => {
            GrayImage::new(w, h, la.pixels().map(|p| p[0]).collect())
        }
        DynamicImage::ImageRgba8(_) | DynamicImage::ImageLumaA8(_) => {
            Err(Error::UnsupportedFormat("PNG with transparency".into()))
        }
        other => Err(Error::UnsupportedFormat(format!("PNG color type {:?}", other.color()))),
    }
}

/// Writes a binary PGM.
pub fn save_pgm(path: impl AsRef<Path>, img: &GrayImage) -> Result<()> {
    let path = path.as_ref();
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.data());
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Writes an 8-bit grayscale PNG.
pub fn save_png(path: impl AsRef<Path>, img: &GrayImage) -> Result<()> {
    let buf = image::GrayImage::from_raw(img.width() as u32, img.height() as u32, img.data().to_vec())
        .ok_or_else(|| Error::Encode("buffer size mismatch".into()))?;
    buf.save_with_format(path.as_ref(), image::ImageFormat::Png)
        .map_err(|e| Error::Encode(e.to_string()))
}

/// Color of the `i`-th segment in an overlay: hues spaced by the golden
/// angle, full saturation.
fn overlay_color(i: usize) -> [u8; 3] {
    let h = (i as f64 * 137.507_764) % 360.0 / 60.0;
    let x = 1.0 - (h % 2.0 - 1.0).abs();
    let (r, g, b) = match h as u32 {
        0 => (1.0, x, 0.0),
        1 => (x, 1.0, 0.0),
        2 => (0.0, 1.0, x),
        3 => (0.0, x, 1.0),
        4 => (x, 0.0, 1.0),
        _ => (1.0, 0.0, x),
    };
    [(r * 255.0) as u8, (g * 255.0) as u8, (b * 255.0) as u8]
}

/// Draws `segments` in distinct colors over a dimmed copy of `img`.
pub fn render_overlay(img: &GrayImage, segments: &[Segment]) -> image::RgbImage {
    let (w, h) = (img.width() as u32, img.height() as u32);
    let mut out = image::RgbImage::from_fn(w, h, |x, y| {
        let v = (img.get(x as usize, y as usize) as u32 * 3 / 5) as u8;
        image::Rgb([v, v, v])
    });
    for (i, s) in segments.iter().enumerate() {
        let color = overlay_color(i);
        let px = |p: crate::geometry::Point| Pixel::new(p.x.round() as i32, p.y.round() as i32);
        for p in bresenham(px(s.a), px(s.b)) {
            if p.x >= 0 && p.y >= 0 && (p.x as u32) < w && (p.y as u32) < h {
                out.put_pixel(p.x as u32, p.y as u32, image::Rgb(color));
            }
        }
    }
    out
}

/// Renders [`render_overlay`] to a PNG file.
pub fn save_overlay(path: impl AsRef<Path>, img: &GrayImage, segments: &[Segment]) -> Result<()> {
    render_overlay(img, segments)
        .save_with_format(path.as_ref(), image::ImageFormat::Png)
        .map_err(|e| Error::Encode(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tmp() -> tempfile::TempDir {
        tempfile::tempdir().unwrap()
    }

    fn random_records(n: usize, seed: u64) -> Vec<SegmentRecord> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Values with at most 6 decimals survive the text form exactly.
        let mut v = |hi: f64| (rng.random_range(0.0..hi) * 1e6f64).round() / 1e6;
        (0..n)
            .map(|_| SegmentRecord {
                x1: v(640.0),
                y1: v(480.0),
                x2: v(640.0),
                y2: v(480.0),
                score: v(1.0),
            })
            .collect()
    }

    #[test]
    fn csv_and_jsonl_round_trip() {
        let dir = tmp();
        let recs = random_records(100, 3);
        for name in ["s.csv", "s.jsonl"] {
            let p = dir.path().join(name);
            write_segments(&p, &recs).unwrap();
            assert_eq!(read_segments(&p).unwrap(), recs);
        }
    }

    #[test]
    fn header_only_is_empty() {
        let dir = tmp();
        let p = dir.path().join("e.csv");
        fs::write(&p, "x1,y1,x2,y2,score\n").unwrap();
        assert!(read_segments(&p).unwrap().is_empty());
        write_segments(&p, &[]).unwrap();
        assert!(read_segments(&p).unwrap().is_empty());
    }

    #[test]
    fn nan_rejected_with_line() {
        let dir = tmp();
        let p = dir.path().join("n.csv");
        fs::write(&p, "x1,y1,x2,y2,score\n1,2,3,4,0.5\n1,NaN,3,4,0.5\n").unwrap();
        match read_segments(&p) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let p = dir.path().join("n.jsonl");
        fs::write(&p, "{\"x1\":1,\"y1\":2,\"x2\":3,\"y2\":4,\"score\":-1}\n").unwrap();
        assert!(matches!(read_segments(&p), Err(Error::Parse { line: 1, .. })));
        let bad = SegmentRecord {
            x1: f64::NAN,
            y1: 0.0,
            x2: 1.0,
            y2: 1.0,
            score: 1.0,
        };
        assert!(write_segments(dir.path().join("w.csv"), &[bad]).is_err());
    }

    #[test]
    fn malformed_row() {
        let dir = tmp();
        let p = dir.path().join("m.csv");
        fs::write(&p, "x1,y1,x2,y2,score\n1,2,3,4,0.5\n1,2,abc,4,0.5\n").unwrap();
        assert!(matches!(read_segments(&p), Err(Error::Parse { line: 3, .. })));
        let p = dir.path().join("h.csv");
        fs::write(&p, "a,b\n1,2\n").unwrap();
        assert!(matches!(read_segments(&p), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(read_segments(dir.path().join("x.txt")), Err(Error::UnsupportedFormat(_))));
    }

    #[test]
    fn ground_truth_score_optional() {
        let dir = tmp();
        let p = dir.path().join("gt.csv");
        fs::write(&p, "x1,y1,x2,y2\n0,0,10,0\n").unwrap();
        assert_eq!(read_ground_truth(&p).unwrap(), vec![Segment::from_coords(0.0, 0.0, 10.0, 0.0)]);
        assert!(read_segments(&p).is_err());
    }

    #[test]
    fn homography_files() {
        let dir = tmp();
        let p = dir.path().join("h.txt");
        fs::write(&p, "1 0 0\n0 1 0\n0 0 1\n").unwrap();
        assert_eq!(load_homography(&p).unwrap(), Homography::identity());
        fs::write(&p, "2 0 0 0 2 0 0 0 1").unwrap();
        let h = load_homography(&p).unwrap();
        assert_eq!(h.apply(crate::geometry::Point::new(1.0, 1.0)), Some(crate::geometry::Point::new(2.0, 2.0)));
        fs::write(&p, "0 0 0 0 0 0 0 0 0").unwrap();
        assert!(matches!(load_homography(&p), Err(Error::SingularHomography)));
        fs::write(&p, "1 0 0 0 1 0 0 0").unwrap();
        assert!(matches!(load_homography(&p), Err(Error::Parse { .. })));
        save_homography(&p, &Homography::translation(10.0, -2.5)).unwrap();
        assert_eq!(load_homography(&p).unwrap(), Homography::translation(10.0, -2.5));
    }

    #[test]
    fn pgm_round_trip_and_errors() {
        let dir = tmp();
        let img = GrayImage::from_fn(64, 48, |x, y| (x * 3 + y) as u8).unwrap();
        let p = dir.path().join("a.pgm");
        save_pgm(&p, &img).unwrap();
        assert_eq!(load_image(&p).unwrap(), img);

        let bytes = fs::read(&p).unwrap();
        assert!(matches!(decode_image(&bytes[..bytes.len() - 10]), Err(Error::TruncatedImage(_))));
        assert!(matches!(decode_image(&bytes[..6]), Err(Error::TruncatedImage(_))));
        assert!(matches!(decode_image(b"P2\n2 2\n255\n0 0 0 0"), Err(Error::UnsupportedFormat(_))));
        assert!(matches!(decode_image(b"P5\n2 2\n65535\n"), Err(Error::UnsupportedFormat(_))));
        assert!(decode_image(b"P5\n# comment\n2 1\n255\n\x05\x07").is_ok());
    }

    #[test]
    fn png_gray_and_rgb() {
        let dir = tmp();
        let img = GrayImage::from_fn(20, 10, |x, y| (x * 10 + y) as u8).unwrap();
        let p = dir.path().join("g.png");
        save_png(&p, &img).unwrap();
        assert_eq!(load_image(&p).unwrap(), img);

        let rgb = image::RgbImage::from_fn(20, 10, |x, y| {
            let v = (x * 10 + y) as u8;
            image::Rgb([v, v, v])
        });
        let p = dir.path().join("c.png");
        rgb.save(&p).unwrap();
        assert_eq!(load_image(&p).unwrap(), img);

        let bytes = fs::read(&p).unwrap();
        assert!(matches!(decode_image(&bytes[..bytes.len() / 2]), Err(Error::TruncatedImage(_))));
    }

    #[test]
    fn luma_weights() {
        assert_eq!(luma(255, 0, 0), 76);
        assert_eq!(luma(0, 255, 0), 150);
        assert_eq!(luma(0, 0, 255), 29);
        assert_eq!(luma(255, 255, 255), 255);
    }

    #[test]
    fn overlay_draws_segments() {
        let img = GrayImage::filled(30, 30, 100).unwrap();
        let o = render_overlay(&img, &[Segment::from_coords(2.0, 5.0, 27.0, 5.0)]);
        assert_eq!(o.get_pixel(10, 5).0, overlay_color(0));
        assert_eq!(o.get_pixel(10, 6).0, [60, 60, 60]);
    }
}
