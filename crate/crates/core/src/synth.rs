//! Synthetic test images with known geometry.
//!
//! Straight edges in these fixtures are step edges between two flat regions.
//! A filled polygon would add one straight edge per side, so regions are
//! closed by a chain of round bumps instead: their curvature is far too high
//! for any `t_min_length` window to fit a line, which leaves the straight
//! side as the only detectable segment. Straight edges sit on pixel centers;
//! an edge halfway between two pixel rows gives both rows the same gradient
//! and neither becomes an anchor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Point, Segment};
use crate::imgproc::GrayImage;

pub const DARK: u8 = 28;
pub const BRIGHT: u8 = 228;

/// Renders `f` (intensity at a continuous position) with `ss x ss`
/// supersampling per pixel. Pixel `(x, y)` covers `[x - 0.5, x + 0.5]`.
pub fn supersample(width: usize, height: usize, ss: usize, f: impl Fn(f64, f64) -> f64) -> GrayImage {
    let ss = ss.max(1);
    let inv = 1.0 / ss as f64;
    GrayImage::from_fn(width, height, |x, y| {
        let mut acc = 0.0;
        for j in 0..ss {
            for i in 0..ss {
                let sx = x as f64 - 0.5 + (i as f64 + 0.5) * inv;
                let sy = y as f64 - 0.5 + (j as f64 + 0.5) * inv;
                acc += f(sx, sy);
            }
        }
        (acc * inv * inv).round().clamp(0.0, 255.0) as u8
    })
    .expect("non-empty fixture")
}

/// Radius of the bumps that make up the closing arc.
pub const BUMP_RADIUS: f64 = 8.0;

/// Indicator of a half-disk whose diameter is `p0 -> p1`, lying on the left
/// of the direction `p0 -> p1` in image coordinates (y down). The round side
/// is a chain of overlapping bumps of radius [`BUMP_RADIUS`].
pub fn bumpy_half_disk(p0: Point, p1: Point) -> impl Fn(f64, f64) -> bool {
    let c = Point::new(0.5 * (p0.x + p1.x), 0.5 * (p0.y + p1.y));
    let r = 0.5 * p0.dist(p1);
    let (ux, uy) = ((p1.x - p0.x) / (2.0 * r), (p1.y - p0.y) / (2.0 * r));
    let core = r - BUMP_RADIUS;
    let n = (std::f64::consts::PI * core / 15.0).round().max(1.0) as usize;
    // Bump centers in (along, across) coordinates.
    let bumps: Vec<(f64, f64)> = (0..=n)
        .map(|i| {
            let phi = std::f64::consts::PI * i as f64 / n as f64;
            (core * phi.cos(), core * phi.sin())
        })
        .collect();
    let rr = BUMP_RADIUS * BUMP_RADIUS;
    move |x, y| {
        let (dx, dy) = (x - c.x, y - c.y);
        let t = dx * ux + dy * uy;
        let s = dx * uy - dy * ux;
        if s < 0.0 {
            return false;
        }
        t * t + s * s < core * core || bumps.iter().any(|&(bt, bs)| (t - bt).powi(2) + (s - bs).powi(2) < rr)
    }
}

/// 200x200 image with one straight step edge of length 120 through the
/// center at `angle_deg` (counter-clockwise on screen, 0 = horizontal).
/// Contrast is `BRIGHT - DARK = 200`. Returns the image and the edge.
pub fn single_edge(angle_deg: f64) -> (GrayImage, Segment) {
    let (size, half) = (200usize, 60.0);
    let th = angle_deg.to_radians();
    let c = Point::new(100.0, 100.0);
    let (ux, uy) = (th.cos(), -th.sin());
    let p0 = Point::new(c.x - half * ux, c.y - half * uy);
    let p1 = Point::new(c.x + half * ux, c.y + half * uy);
    let inside = bumpy_half_disk(p0, p1);
    let img = supersample(size, size, 8, |x, y| if inside(x, y) { DARK as f64 } else { BRIGHT as f64 });
    (img, Segment::new(p0, p1))
}

/// 240x150 image with a horizontal step edge of length 200 on row 40,
/// interrupted in the middle by a mid-gray block `gap` pixels wide.
/// Returns the image and the full edge.
pub fn broken_edge(gap: usize) -> (GrayImage, Segment) {
    let (w, h) = (240usize, 150usize);
    let y0 = 40.0;
    let p0 = Point::new(20.0, y0);
    let p1 = Point::new(220.0, y0);
    let inside = bumpy_half_disk(p1, p0);
    let gx0 = 120.0 - gap as f64 / 2.0;
    let gx1 = gx0 + gap as f64;
    let img = supersample(w, h, 8, |x, y| {
        if (gx0..gx1).contains(&x) && (y0 - 6.0..y0 + 6.0).contains(&y) {
            return 128.0;
        }
        if inside(x, y) {
            DARK as f64
        } else {
            BRIGHT as f64
        }
    });
    (img, Segment::new(p0, p1))
}

/// Three flat regions meeting in a T: the right half is mid-gray, the left
/// half is bright above and dark below. The horizontal edge ends at the
/// vertical one, which runs the full height.
pub fn t_junction(size: usize) -> (GrayImage, [Segment; 2]) {
    let c = (size / 2) as f64;
    let img = supersample(size, size, 8, |x, y| {
        if x >= c {
            128.0
        } else if y < c {
            BRIGHT as f64
        } else {
            DARK as f64
        }
    });
    let last = size as f64 - 1.0;
    (
        img,
        [
            Segment::from_coords(0.0, c, c, c),
            Segment::from_coords(c, 0.0, c, last),
        ],
    )
}

/// Uniform random intensities in `0..=255`.
pub fn uniform_noise(width: usize, height: usize, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GrayImage::from_fn(width, height, |_, _| rng.random()).expect("non-empty fixture")
}

/// A scene of flat quadrilaterals and triangles on a mid-gray background,
/// shifted by `(dx, dy)`. Rendering the same scene at two offsets gives a
/// pair related by a pure translation.
pub fn polygon_scene(width: usize, height: usize, dx: f64, dy: f64) -> GrayImage {
    let polys: [(&[(f64, f64)], f64); 5] = [
        (&[(40.0, 40.0), (150.0, 52.0), (140.0, 130.0), (52.0, 118.0)], 30.0),
        (&[(190.0, 30.0), (290.0, 70.0), (230.0, 150.0)], 220.0),
        (&[(60.0, 160.0), (180.0, 170.0), (160.0, 220.0), (70.0, 215.0)], 200.0),
        (&[(220.0, 180.0), (300.0, 175.0), (285.0, 225.0)], 40.0),
        (&[(100.0, 70.0), (125.0, 80.0), (115.0, 100.0)], 235.0),
    ];
    supersample(width, height, 4, |x, y| {
        let (px, py) = (x - dx, y - dy);
        polys
            .iter()
            .rev()
            .find(|(poly, _)| inside_polygon(poly, px, py))
            .map_or(128.0, |&(_, v)| v)
    })
}

/// Even-odd point-in-polygon test.
pub fn inside_polygon(poly: &[(f64, f64)], x: f64, y: f64) -> bool {
    let mut inside = false;
    let mut j = poly.len() - 1;
    for i in 0..poly.len() {
        let (xi, yi) = poly[i];
        let (xj, yj) = poly[j];
        if (yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi {
            inside = !inside;
        }
        j = i;
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn supersampled_half_plane() {
        let img = supersample(4, 2, 8, |x, _| if x < 1.0 { 0.0 } else { 255.0 });
        assert_eq!(img.get(0, 0), 0);
        // Pixel 1 covers [0.5, 1.5]: half dark.
        assert_eq!(img.get(1, 0), 128);
        assert_eq!(img.get(3, 1), 255);
    }

    #[test]
    fn edge_fixture_geometry() {
        let (img, gt) = single_edge(0.0);
        assert!((gt.length() - 120.0).abs() < 1e-9);
        // Dark above the edge, bright below, half and half on it.
        assert_eq!(img.get(60, 98), DARK);
        assert_eq!(img.get(60, 100), 128);
        assert_eq!(img.get(60, 102), BRIGHT);
        // Beyond the edge ends the image is bright on both sides.
        assert_eq!(img.get(170, 98), BRIGHT);
    }

    #[test]
    fn noise_is_seeded() {
        assert_eq!(uniform_noise(20, 20, 7), uniform_noise(20, 20, 7));
        assert_ne!(uniform_noise(20, 20, 7), uniform_noise(20, 20, 8));
    }

    #[test]
    fn polygon_test() {
        let sq = [(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0)];
        assert!(inside_polygon(&sq, 1.0, 1.0));
        assert!(!inside_polygon(&sq, 3.0, 1.0));
    }
}
