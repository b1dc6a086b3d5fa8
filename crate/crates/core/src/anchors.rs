//! Anchor extraction: local maxima of the gradient magnitude along the
//! quantized gradient direction, tested on a subsampled grid.

use crate::eed::Pixel;
use crate::imgproc::{EdgeOrientation, GradientMap};

/// Seed pixel for the drawing walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Anchor {
    pub pixel: Pixel,
    pub orient: EdgeOrientation,
    pub magnitude: u16,
}

/// True when `(x, y)` passes the two-sided margin test against its neighbours
/// across the edge.
pub fn is_anchor(grad: &GradientMap, x: usize, y: usize, t_anchor: u16) -> bool {
    if x == 0 || y == 0 || x + 1 >= grad.width() || y + 1 >= grad.height() {
        return false;
    }
    let g = grad.magnitude(x, y) as i32;
    if g == 0 {
        return false;
    }
    let t = t_anchor as i32;
    let (a, b) = match grad.orientation(x, y) {
        EdgeOrientation::Vertical => (grad.magnitude(x - 1, y), grad.magnitude(x + 1, y)),
        EdgeOrientation::Horizontal => (grad.magnitude(x, y - 1), grad.magnitude(x, y + 1)),
    };
    g - a as i32 >= t && g - b as i32 >= t
}

/// Extracts anchors on rows and columns that are multiples of
/// `scan_interval`, strongest first (ties in row-major order).
pub fn extract_anchors(grad: &GradientMap, t_anchor: u16, scan_interval: usize) -> Vec<Anchor> {
    let step = scan_interval.max(1);
    let mut anchors = Vec::new();
    for y in (0..grad.height()).step_by(step) {
        for x in (0..grad.width()).step_by(step) {
            if is_anchor(grad, x, y, t_anchor) {
                anchors.push(Anchor {
                    pixel: Pixel::new(x as i32, y as i32),
                    orient: grad.orientation(x, y),
                    magnitude: grad.magnitude(x, y),
                });
            }
        }
    }
    // Stable sort keeps row-major order among equal magnitudes.
    anchors.sort_by_key(|a| std::cmp::Reverse(a.magnitude));
    anchors
}
