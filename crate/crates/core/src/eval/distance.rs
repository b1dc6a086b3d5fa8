use crate::error::{Error, Result};
use crate::geometry::Segment;

/// Mean endpoint distance under the better of the two endpoint pairings.
pub fn structural_distance(s1: &Segment, s2: &Segment) -> Result<f64> {
    if s1.is_degenerate() || s2.is_degenerate() {
        return Err(Error::DegenerateSegment);
    }
    let straight = 0.5 * (s1.a.dist(s2.a) + s1.b.dist(s2.b));
    let crossed = 0.5 * (s1.a.dist(s2.b) + s1.b.dist(s2.a));
    Ok(straight.min(crossed))
}

/// Interval of `b`'s orthogonal projection onto `a`'s line, in pixels from
/// `a.a`.
fn projected_interval(a: &Segment, b: &Segment) -> (f64, f64) {
    let (t0, t1) = (a.param(b.a), a.param(b.b));
    (t0.min(t1), t0.max(t1))
}

/// `a ∩_a b`: length of `b` projected onto `a`'s line, intersected with `a`.
/// Zero for a degenerate `a`.
pub fn directed_overlap(a: &Segment, b: &Segment) -> f64 {
    if a.is_degenerate() {
        return 0.0;
    }
    let (lo, hi) = projected_interval(a, b);
    (hi.min(a.length()) - lo.max(0.0)).max(0.0)
}

/// `a ∪_a b`: covered length of the union of `a` and `b`'s projection on
/// `a`'s line.
pub fn directed_union(a: &Segment, b: &Segment) -> f64 {
    if a.is_degenerate() {
        return 0.0;
    }
    let (lo, hi) = projected_interval(a, b);
    a.length() + (hi - lo) - directed_overlap(a, b)
}
