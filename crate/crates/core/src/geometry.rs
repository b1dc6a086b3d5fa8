//! Floating-point points and segments in image coordinates (x right, y down,
//! origin at the center of the top-left pixel).

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    #[inline]
    pub const fn new(a: Point, b: Point) -> Self {
        Self { a, b }
    }

    pub fn from_coords(x1: f64, y1: f64, x2: f64, y2: f64) -> Self {
        Self::new(Point::new(x1, y1), Point::new(x2, y2))
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn is_degenerate(&self) -> bool {
        !(self.length() > 0.0)
    }

    pub fn midpoint(&self) -> Point {
        Point::new(0.5 * (self.a.x + self.b.x), 0.5 * (self.a.y + self.b.y))
    }

    pub fn reversed(&self) -> Self {
        Self::new(self.b, self.a)
    }

    /// Unit vector from `a` to `b`; zero for a degenerate segment.
    pub fn unit(&self) -> (f64, f64) {
        let len = self.length();
        if len == 0.0 {
            return (0.0, 0.0);
        }
        ((self.b.x - self.a.x) / len, (self.b.y - self.a.y) / len)
    }

    /// Unit normal (the direction rotated by +90 degrees).
    pub fn normal(&self) -> (f64, f64) {
        let (ux, uy) = self.unit();
        (-uy, ux)
    }

    /// Undirected angle to `other` in radians, in `[0, pi/2]`.
    pub fn angle_to(&self, other: &Segment) -> f64 {
        let (ux, uy) = self.unit();
        let (vx, vy) = other.unit();
        (ux * vx + uy * vy).abs().min(1.0).acos()
    }

    /// Position of the orthogonal projection of `p` along the supporting
    /// line, measured in pixels from `a`.
    pub fn param(&self, p: Point) -> f64 {
        let (ux, uy) = self.unit();
        (p.x - self.a.x) * ux + (p.y - self.a.y) * uy
    }

    /// Distance from `p` to the infinite supporting line.
    pub fn line_distance(&self, p: Point) -> f64 {
        let (nx, ny) = self.normal();
        ((p.x - self.a.x) * nx + (p.y - self.a.y) * ny).abs()
    }

    pub fn point_at(&self, t: f64) -> Point {
        let (ux, uy) = self.unit();
        Point::new(self.a.x + t * ux, self.a.y + t * uy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_measures() {
        let s = Segment::from_coords(0.0, 0.0, 3.0, 4.0);
        assert_eq!(s.length(), 5.0);
        assert_eq!(s.midpoint(), Point::new(1.5, 2.0));
        assert!((s.param(Point::new(3.0, 4.0)) - 5.0).abs() < 1e-12);
        assert!(s.line_distance(Point::new(4.0, -3.0)) - 5.0 < 1e-12);
        assert!(Segment::from_coords(1.0, 1.0, 1.0, 1.0).is_degenerate());
    }

    #[test]
    fn angle_is_undirected() {
        let s = Segment::from_coords(0.0, 0.0, 10.0, 0.0);
        let t = Segment::from_coords(5.0, 5.0, 0.0, 0.0);
        let q = std::f64::consts::FRAC_PI_4;
        assert!((s.angle_to(&t) - q).abs() < 1e-12);
        assert!((s.angle_to(&s.reversed())).abs() < 1e-12);
    }
}
