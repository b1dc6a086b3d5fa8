use super::{Direction, LineFit, Pixel};
use crate::imgproc::GradientMap;

/// Picks the next edge pixel when walking `dir` from `current`.
///
/// When the orientation of `current` agrees with the walk axis the three
/// forward neighbours are candidates. Otherwise the edge is running
/// diagonally and only two pixels are considered: straight ahead and the
/// forward diagonal that keeps the lateral drift of `previous -> current`.
/// `drift_hint` supplies that drift when the last move was straight (pass
/// the last non-zero drift of the walk, or 0 if none).
///
/// Returns `None` when every candidate is outside the image or has zero
/// gradient. Ties prefer straight ahead, then the diagonal closer to `line`.
pub fn draw_next_pixel(
    grad: &GradientMap,
    current: Pixel,
    previous: Pixel,
    dir: Direction,
    drift_hint: i32,
    line: Option<&LineFit>,
) -> Option<Pixel> {
    let (fx, fy) = dir.step();
    let (lx, ly) = dir.lateral();
    let straight = current.offset(fx, fy);
    let side = |s: i32| straight.offset(s * lx, s * ly);

    let orient = grad.orientation(current.x as usize, current.y as usize);
    let mut candidates: [Option<Pixel>; 3] = [Some(straight), None, None];
    if dir.follows(orient) {
        candidates[1] = Some(side(-1));
        candidates[2] = Some(side(1));
    } else {
        let mut drift = dir.drift(previous, current);
        if drift == 0 {
            drift = drift_hint.signum();
        }
        if drift == 0 {
            let (gm, gp) = (mag(grad, side(-1)), mag(grad, side(1)));
            drift = if gp >= gm { 1 } else { -1 };
        }
        candidates[1] = Some(side(drift));
    }

    let mut best: Option<(Pixel, u16)> = None;
    for cand in candidates.into_iter().flatten() {
        let g = mag(grad, cand);
        if g == 0 {
            continue;
        }
        best = match best {
            None => Some((cand, g)),
            Some((_, bg)) if g > bg => Some((cand, g)),
            Some((b, bg)) if g == bg && b != straight && closer(line, cand, b) => Some((cand, g)),
            keep => keep,
        };
    }
    best.map(|(p, _)| p)
}

#[inline]
fn mag(grad: &GradientMap, p: Pixel) -> u16 {
    grad.magnitude_at(p.x, p.y)
}

fn closer(line: Option<&LineFit>, a: Pixel, b: Pixel) -> bool {
    match line {
        Some(fit) => fit.distance(a.x as f64, a.y as f64) < fit.distance(b.x as f64, b.y as f64),
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eed::bresenham;
    use crate::imgproc::{compute_gradient, gaussian_blur, EdgeOrientation, GrayImage};

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
        GradientMap::from_components(width, height, gx, gy, 1).unwrap()
    }

    #[test]
    fn straight_on_horizontal_row() {
        // Horizontal edge on row 5: strong vertical gradient, weaker neighbours.
        let grad = map_from(20, 11, |_, y| match y {
            5 => (0, 400),
            4 | 6 => (0, 200),
            _ => (0, 0),
        });
        let mut cur = Pixel::new(2, 5);
        let mut prev = cur;
        for _ in 0..15 {
            let next = draw_next_pixel(&grad, cur, prev, Direction::Right, 0, None).unwrap();
            assert_eq!(next, cur.offset(1, 0));
            prev = cur;
            cur = next;
        }
    }

    #[test]
    fn halts_on_weak_edge_and_border() {
        let grad = map_from(10, 10, |x, y| if y == 5 && x < 6 { (0, 300) } else { (0, 0) });
        let p = Pixel::new(5, 5);
        assert_eq!(draw_next_pixel(&grad, p, p.offset(-1, 0), Direction::Right, 0, None), None);
        // Border ring is zero, so walking off the image also halts.
        let grad = map_from(10, 10, |_, y| if y == 5 { (0, 300) } else { (0, 0) });
        let p = Pixel::new(8, 5);
        assert_eq!(draw_next_pixel(&grad, p, p.offset(-1, 0), Direction::Right, 0, None), None);
    }

    #[test]
    fn diagonal_case_has_two_candidates() {
        // Walking right into a vertical-edge pixel after drifting down: the
        // up-right neighbour is excluded even though it is the strongest.
        let grad = map_from(10, 10, |x, y| match (x, y) {
            (4, 4) => (300, 0),
            (5, 3) => (0, 900),
            (5, 4) => (0, 100),
            (5, 5) => (0, 200),
            _ => (0, 0),
        });
        assert_eq!(grad.orientation(4, 4), EdgeOrientation::Vertical);
        let next = draw_next_pixel(&grad, Pixel::new(4, 4), Pixel::new(3, 3), Direction::Right, 0, None);
        assert_eq!(next, Some(Pixel::new(5, 5)));
        // With matching orientation the three forward pixels compete.
        let grad3 = map_from(10, 10, |x, y| match (x, y) {
            (4, 4) => (0, 300),
            (5, 3) => (0, 900),
            (5, 4) => (0, 100),
            (5, 5) => (0, 200),
            _ => (0, 0),
        });
        let next = draw_next_pixel(&grad3, Pixel::new(4, 4), Pixel::new(3, 3), Direction::Right, 0, None);
        assert_eq!(next, Some(Pixel::new(5, 3)));
    }

    #[test]
    fn ties_prefer_straight() {
        let grad = map_from(10, 10, |x, _| if x >= 4 { (0, 300) } else { (0, 0) });
        let p = Pixel::new(4, 4);
        assert_eq!(draw_next_pixel(&grad, p, p, Direction::Right, 0, None), Some(Pixel::new(5, 4)));
    }

    /// Renders a dark/bright half-plane split by the line `y = x + 0.5 * k`
    /// through a 45 degree diagonal, then walks it.
    #[test]
    fn diagonal_walk_reproduces_bresenham() {
        let n = 48;
        let img = GrayImage::from_fn(n, n, |x, y| {
            let d = y as f64 - x as f64;
            if d > 0.5 {
                30
            } else if d < -0.5 {
                230
            } else {
                130
            }
        })
        .unwrap();
        let grad = compute_gradient(&gaussian_blur(&img, 5, 1.0).unwrap(), 30).unwrap();
        let start = Pixel::new(8, 8);
        let mut cur = start;
        let mut prev = start.offset(-1, -1);
        let mut drift = 1;
        let mut walked = vec![cur];
        for _ in 0..30 {
            let next = draw_next_pixel(&grad, cur, prev, Direction::Right, drift, None).unwrap();
            let d = Direction::Right.drift(cur, next);
            if d != 0 {
                drift = d;
            }
            walked.push(next);
            prev = cur;
            cur = next;
        }
        let oracle = bresenham(start, *walked.last().unwrap());
        assert_eq!(walked, oracle);
    }
}
