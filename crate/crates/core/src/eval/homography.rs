use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, Segment};

/// Planar projective transform acting on `(x, y, 1)` column vectors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Homography {
    m: [[f64; 3]; 3],
}

impl Homography {
    /// Normalizes so that `h[2][2] == 1` when it is nonzero. Rejects
    /// non-finite and singular matrices.
    pub fn new(m: [[f64; 3]; 3]) -> Result<Self> {
        if m.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::SingularHomography);
        }
        let mut m = m;
        if m[2][2] != 0.0 {
            let s = m[2][2];
            for v in m.iter_mut().flatten() {
                *v /= s;
            }
        }
        let scale = m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
        let h = Self { m };
        if scale == 0.0 || h.det().abs() <= 1e-12 * scale.powi(3) {
            return Err(Error::SingularHomography);
        }
        Ok(h)
    }

    pub fn identity() -> Self {
        Self {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    pub fn translation(dx: f64, dy: f64) -> Self {
        Self {
            m: [[1.0, 0.0, dx], [0.0, 1.0, dy], [0.0, 0.0, 1.0]],
        }
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        self.m
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn inverse(&self) -> Self {
        let m = &self.m;
        let d = self.det();
        let c = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        let adj = [
            [c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2)],
            [-c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2)],
            [c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1)],
        ];
        let mut inv = [[0.0; 3]; 3];
        for r in 0..3 {
            for k in 0..3 {
                inv[r][k] = adj[r][k] / d;
            }
        }
        if inv[2][2] != 0.0 {
            let s = inv[2][2];
            for v in inv.iter_mut().flatten() {
                *v /= s;
            }
        }
        Self { m: inv }
    }

    /// Homogeneous image of `p` before the perspective divide.
    fn apply_h(&self, p: Point) -> (f64, f64, f64) {
        let m = &self.m;
        (
            m[0][0] * p.x + m[0][1] * p.y + m[0][2],
            m[1][0] * p.x + m[1][1] * p.y + m[1][2],
            m[2][0] * p.x + m[2][1] * p.y + m[2][2],
        )
    }

    /// Maps `p`; `None` when it lands on the line at infinity.
    pub fn apply(&self, p: Point) -> Option<Point> {
        let (x, y, w) = self.apply_h(p);
        if w.abs() < 1e-12 {
            return None;
        }
        Some(Point::new(x / w, y / w))
    }
}

/// Maps both endpoints through `h` and clips the result to the
/// `[0, width - 1] x [0, height - 1]` rectangle. `None` when the segment
/// crosses the line at infinity or falls outside the image.
pub fn project_segment(s: &Segment, h: &Homography, width: usize, height: usize) -> Option<Segment> {
    let (_, _, wa) = h.apply_h(s.a);
    let (_, _, wb) = h.apply_h(s.b);
    if wa * wb <= 0.0 {
        return None;
    }
    let mapped = Segment::new(h.apply(s.a)?, h.apply(s.b)?);
    clip_segment(&mapped, width, height)
}

/// Liang-Barsky clipping to the pixel-center rectangle of a
/// `width x height` image. Degenerate results count as outside.
pub fn clip_segment(s: &Segment, width: usize, height: usize) -> Option<Segment> {
    if width == 0 || height == 0 {
        return None;
    }
    let (xmax, ymax) = ((width - 1) as f64, (height - 1) as f64);
    let (dx, dy) = (s.b.x - s.a.x, s.b.y - s.a.y);
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (p, q) in [(-dx, s.a.x), (dx, xmax - s.a.x), (-dy, s.a.y), (dy, ymax - s.a.y)] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    if t0 >= t1 {
        return None;
    }
    let at = |t: f64| Point::new(s.a.x + t * dx, s.a.y + t * dy);
    let out = Segment::new(at(t0), at(t1));
    (!out.is_degenerate()).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seg(x1: f64, y1: f64, x2: f64, y2: f64) -> Segment {
        Segment::from_coords(x1, y1, x2, y2)
    }

    #[test]
    fn identity_keeps_segment() {
        let s = seg(3.0, 4.0, 50.0, 20.0);
        assert_eq!(project_segment(&s, &Homography::identity(), 100, 100), Some(s));
    }

    #[test]
    fn translation_with_clip() {
        let s = seg(0.0, 0.0, 10.0, 0.0);
        let p = project_segment(&s, &Homography::translation(5.0, 0.0), 12, 5).unwrap();
        assert_eq!(p, seg(5.0, 0.0, 11.0, 0.0));
    }

    #[test]
    fn fully_outside() {
        let s = seg(0.0, 0.0, 10.0, 0.0);
        assert_eq!(project_segment(&s, &Homography::translation(50.0, 0.0), 20, 20), None);
    }

    #[test]
    fn singular_rejected_and_normalized() {
        assert!(matches!(Homography::new([[0.0; 3]; 3]), Err(Error::SingularHomography)));
        assert!(Homography::new([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 0.0, 1.0]]).is_err());
        let h = Homography::new([[4.0, 0.0, 0.0], [0.0, 4.0, 0.0], [0.0, 0.0, 2.0]]).unwrap();
        assert_eq!(h.matrix()[2][2], 1.0);
        assert_eq!(h.apply(Point::new(1.0, 1.0)), Some(Point::new(2.0, 2.0)));
    }

    #[test]
    fn point_at_infinity() {
        let h = Homography::new([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 0.0, 1.0]]).unwrap();
        assert_eq!(h.apply(Point::new(-1.0, 0.0)), None);
        assert_eq!(project_segment(&seg(-2.0, 0.0, 2.0, 0.0), &h, 100, 100), None);
    }

    proptest! {
        #[test]
        fn inverse_round_trip(
            a in -2.0f64..2.0, b in -2.0f64..2.0, c in -50.0f64..50.0,
            d in -2.0f64..2.0, e in -2.0f64..2.0, f in -50.0f64..50.0,
            g in -1e-3f64..1e-3, hh in -1e-3f64..1e-3,
            x in 0.0f64..100.0, y in 0.0f64..100.0,
        ) {
            prop_assume!((a * e - b * d).abs() > 0.1);
            let h = Homography::new([[a, b, c], [d, e, f], [g, hh, 1.0]]).unwrap();
            let p = Point::new(x, y);
            if let Some(q) = h.apply(p) {
                if let Some(r) = h.inverse().apply(q) {
                    prop_assert!(r.dist(p) < 1e-6 * (1.0 + q.x.abs() + q.y.abs()));
                }
            }
        }
    }
}
