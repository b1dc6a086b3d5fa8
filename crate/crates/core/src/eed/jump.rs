use super::{bresenham, draw_next_pixel, Direction, Pixel, SegEnd, SegmentCandidate};
use crate::detector::DetectorParams;
use crate::imgproc::GradientMap;

/// An accepted jump over a discontinuity.
#[derive(Clone, Debug, PartialEq)]
pub struct Jump {
    /// First pixel after the gap; drawing resumes here.
    pub landing: Pixel,
    pub dir: Direction,
    /// Jump length that was accepted.
    pub length: usize,
    /// Pixels strictly between the segment end and the landing pixel.
    pub skipped: Vec<Pixel>,
    /// Extension pixels drawn from the landing pixel during the check.
    pub extension: Vec<Pixel>,
}

/// Tries each configured jump length, shortest first, from the segment end
/// `end` along the fitted line. A length `J` is accepted when
///
/// 1. the segment has more than `J` pixels,
/// 2. the pixel `J` steps ahead on the line is inside the image, unvisited
///    and has non-zero gradient,
/// 3. `J` extension pixels can be drawn from it (not committed), and
/// 4. with jump validation on, the gradient autocorrelation over the
///    extension pixels and a one-pixel band on each side has a dominant
///    direction (`l1 / l2 >= t_eigen_ext`) within `t_angle_ext` of the
///    segment normal.
pub fn can_continue(
    seg: &SegmentCandidate,
    end: SegEnd,
    grad: &GradientMap,
    visited: &[bool],
    params: &DetectorParams,
) -> Option<Jump> {
    if !params.jumps_enabled {
        return None;
    }
    let origin = seg.end_pixel(end);
    if seg.last_jump_origin(end) == Some(origin) {
        return None;
    }
    let dir = seg.dir_at(end);
    let (sx, sy) = dir.step();
    let (mut ux, mut uy) = seg.fit.direction();
    if ux * (sx as f64) + uy * (sy as f64) < 0.0 {
        ux = -ux;
        uy = -uy;
    }
    let major = ux.abs().max(uy.abs());
    if major == 0.0 {
        return None;
    }
    let (bx, by) = seg.fit.project(origin.x as f64, origin.y as f64);
    let (lx, ly) = dir.lateral();
    let line_drift = {
        let d = ux * lx as f64 + uy * ly as f64;
        if d.abs() < 1e-9 {
            0
        } else {
            d.signum() as i32
        }
    };
    let visited_at = |p: Pixel| visited[p.y as usize * grad.width() + p.x as usize];

    for &j in &params.jump_lengths {
        if seg.len() <= j {
            break;
        }
        let s = j as f64 / major;
        let landing = Pixel::new((bx + s * ux).round() as i32, (by + s * uy).round() as i32);
        if !grad.contains(landing.x, landing.y)
            || grad.magnitude_at(landing.x, landing.y) == 0
            || visited_at(landing)
        {
            continue;
        }

        let mut extension = Vec::with_capacity(j);
        extension.push(landing);
        let (mut cur, mut prev) = (landing, landing.offset(-sx, -sy));
        let mut drift = line_drift;
        while extension.len() < j {
            let Some(next) = draw_next_pixel(grad, cur, prev, dir, drift, Some(&seg.fit)) else {
                break;
            };
            if visited_at(next) {
                break;
            }
            let d = dir.drift(cur, next);
            if d != 0 {
                drift = d;
            }
            extension.push(next);
            prev = cur;
            cur = next;
        }
        if extension.len() < j {
            continue;
        }

        if params.jump_validation_enabled {
            let mut region = Vec::with_capacity(3 * j);
            for p in &extension {
                for k in -1..=1 {
                    let q = p.offset(k * lx, k * ly);
                    if grad.contains(q.x, q.y) {
                        region.push(q);
                    }
                }
            }
            region.sort_unstable();
            region.dedup();
            if !eigen_check(grad, &region, seg.fit.normal(), params.t_eigen_ext, params.t_angle_ext_deg) {
                continue;
            }
        }

        let mut skipped = bresenham(origin, landing);
        skipped.pop();
        skipped.remove(0);
        return Some(Jump {
            landing,
            dir,
            length: j,
            skipped,
            extension,
        });
    }
    None
}

/// Structure-tensor test over `region`: the eigenvalue ratio `l1 / l2` must
/// reach `t_eigen` and the principal eigenvector must lie within
/// `t_angle_deg` of `normal` (sign-insensitive). A zero minor eigenvalue with
/// a non-zero major one passes the ratio test; an all-zero tensor fails.
pub fn eigen_check(
    grad: &GradientMap,
    region: &[Pixel],
    normal: (f64, f64),
    t_eigen: f64,
    t_angle_deg: f64,
) -> bool {
    let (mut sxx, mut sxy, mut syy) = (0.0f64, 0.0f64, 0.0f64);
    for p in region {
        let gx = grad.gx(p.x as usize, p.y as usize) as f64;
        let gy = grad.gy(p.x as usize, p.y as usize) as f64;
        sxx += gx * gx;
        sxy += gx * gy;
        syy += gy * gy;
    }
    let half_trace = 0.5 * (sxx + syy);
    let disc = (0.25 * (sxx - syy) * (sxx - syy) + sxy * sxy).sqrt();
    let l1 = half_trace + disc;
    let l2 = (half_trace - disc).max(0.0);
    if l1 <= 0.0 {
        return false;
    }
    if l2 > 0.0 && l1 / l2 < t_eigen {
        return false;
    }
    let (vx, vy) = if sxy != 0.0 {
        (l1 - syy, sxy)
    } else if sxx >= syy {
        (1.0, 0.0)
    } else {
        (0.0, 1.0)
    };
    let norm = vx.hypot(vy);
    let cos = ((vx * normal.0 + vy * normal.1) / norm).abs().min(1.0);
    cos.acos().to_degrees() <= t_angle_deg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eed::fit_new_segment;

    fn map_from(width: usize, height: usize, f: impl Fn(usize, usize) -> (i16, i16)) -> GradientMap {
        let mut gx = vec![0; width * height];
        let mut gy = vec![0; width * height];
        for y in 0..height {
            for x in 0..width {
                let (a, b) = f(x, y);
                gx[y * width + x] = a;
                gy[y * width + x] = b;
            }
        }
        GradientMap::from_components(width, height, gx, gy, 30).unwrap()
    }

    /// Horizontal edge on row 10 with a zero-gradient gap over `gap` columns.
    fn broken_row(gap: std::ops::Range<usize>) -> GradientMap {
        map_from(60, 21, |x, y| {
            if gap.contains(&x) {
                return (0, 0);
            }
            match y {
                10 => (0, 400),
                9 | 11 => (0, 150),
                _ => (0, 0),
            }
        })
    }

    fn row_segment(x0: i32, x1: i32) -> SegmentCandidate {
        let pixels: Vec<Pixel> = (x0..=x1).map(|x| Pixel::new(x, 10)).collect();
        fit_new_segment(&pixels, Direction::Right, &DetectorParams::default()).unwrap()
    }

    #[test]
    fn jumps_collinear_gap() {
        let grad = broken_row(25..31);
        let visited = vec![false; 60 * 21];
        let seg = row_segment(5, 24);
        let jump = can_continue(&seg, SegEnd::Tail, &grad, &visited, &DetectorParams::default()).unwrap();
        assert_eq!(jump.length, 7);
        assert_eq!(jump.landing, Pixel::new(31, 10));
        assert_eq!(jump.skipped.len(), 6);
        assert_eq!(jump.extension.len(), 7);
        assert!(jump.skipped.iter().all(|p| p.y == 10 && (25..31).contains(&p.x)));
    }

    #[test]
    fn short_segment_cannot_jump() {
        let grad = broken_row(25..31);
        let visited = vec![false; 60 * 21];
        let mut seg = row_segment(10, 24);
        let params = DetectorParams {
            jump_lengths: vec![15],
            ..DetectorParams::default()
        };
        assert_eq!(seg.len(), 15);
        assert!(can_continue(&seg, SegEnd::Tail, &grad, &visited, &params).is_none());
        // Truncate to 4 pixels: even J = 5 is longer than the segment.
        seg.pixels.truncate(4);
        assert!(can_continue(&seg, SegEnd::Tail, &grad, &visited, &DetectorParams::default()).is_none());
    }

    #[test]
    fn perpendicular_edge_fails_eigen_test() {
        // After the gap the edge continues, but its gradient is horizontal
        // (a vertical edge band): extension pixels exist, alignment does not.
        let grad = map_from(60, 21, |x, y| {
            if (25..31).contains(&x) {
                return (0, 0);
            }
            if x >= 31 {
                return if (9..=11).contains(&y) { (400, 0) } else { (0, 0) };
            }
            match y {
                10 => (0, 400),
                9 | 11 => (0, 150),
                _ => (0, 0),
            }
        });
        let visited = vec![false; 60 * 21];
        let seg = row_segment(5, 24);
        let mut params = DetectorParams::default();
        assert!(can_continue(&seg, SegEnd::Tail, &grad, &visited, &params).is_none());
        // Without validation the same geometry is jumped.
        params.jump_validation_enabled = false;
        assert!(can_continue(&seg, SegEnd::Tail, &grad, &visited, &params).is_some());
    }

    #[test]
    fn visited_landing_is_rejected() {
        let grad = broken_row(25..31);
        let mut visited = vec![false; 60 * 21];
        for x in 29..40 {
            visited[10 * 60 + x] = true;
        }
        let seg = row_segment(5, 24);
        assert!(can_continue(&seg, SegEnd::Tail, &grad, &visited, &DetectorParams::default()).is_none());
    }

    #[test]
    fn disabled_jumps() {
        let grad = broken_row(25..31);
        let visited = vec![false; 60 * 21];
        let params = DetectorParams {
            jumps_enabled: false,
            ..DetectorParams::default()
        };
        assert!(can_continue(&row_segment(5, 24), SegEnd::Tail, &grad, &visited, &params).is_none());
    }

    #[test]
    fn eigen_degenerate_cases() {
        let grad = map_from(8, 8, |x, _| if x == 3 { (0, 500) } else { (0, 0) });
        let region: Vec<Pixel> = (1..7).map(|y| Pixel::new(3, y)).collect();
        // Perfectly uniform direction: l2 == 0 passes, angle to the y normal is 0.
        assert!(eigen_check(&grad, &region, (0.0, 1.0), 10.0, 10.0));
        assert!(!eigen_check(&grad, &region, (1.0, 0.0), 10.0, 10.0));
        // All-zero tensor fails.
        let empty: Vec<Pixel> = (1..7).map(|y| Pixel::new(5, y)).collect();
        assert!(!eigen_check(&grad, &empty, (0.0, 1.0), 10.0, 10.0));
    }

    #[test]
    fn eigen_ratio_threshold() {
        // Two orthogonal gradients of equal energy: ratio 1.
        let grad = map_from(8, 8, |x, y| match (x, y) {
            (2, 2) => (300, 0),
            (3, 2) => (0, 300),
            _ => (0, 0),
        });
        let region = [Pixel::new(2, 2), Pixel::new(3, 2)];
        assert!(!eigen_check(&grad, &region, (1.0, 0.0), 10.0, 45.0));
        assert!(eigen_check(&grad, &region, (1.0, 0.0), 1.0, 90.0));
    }
}
