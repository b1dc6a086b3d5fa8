use super::segment::fit_window;
use super::{can_continue, draw_next_pixel, Direction, LineFit, Pixel, SegEnd, SegmentCandidate};
use crate::anchors::Anchor;
use crate::detector::DetectorParams;
use crate::imgproc::GradientMap;

/// Mutable drawing state shared by all anchors of one detection run.
#[derive(Clone, Debug)]
pub struct DrawState {
    width: usize,
    height: usize,
    visited: Vec<bool>,
    stack: Vec<Branch>,
    edge_pixels: Vec<Pixel>,
}

/// A pending walk on the discontinuity stack.
#[derive(Clone, Debug)]
struct Branch {
    start: Pixel,
    dir: Direction,
    /// Segment being extended and the end the walk grows.
    seg: Option<(usize, SegEnd)>,
    /// Chain drawn before `start` (ending at `start`), for walks that have
    /// not fitted a segment yet.
    prefix: Vec<Pixel>,
    /// `start` is a jump landing pixel that still has to be committed.
    landing: bool,
    /// First walk from the anchor; the opposite direction is still pending.
    seed: Option<Direction>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stop {
    WeakEdge,
    Visited,
    Discontinuity,
}

impl DrawState {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            visited: vec![false; width * height],
            stack: Vec::new(),
            edge_pixels: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Clears the mask so the state can be reused for another image of the
    /// same size.
    pub fn reset(&mut self) {
        self.visited.fill(false);
        self.stack.clear();
        self.edge_pixels.clear();
    }

    #[inline]
    pub fn is_visited(&self, p: Pixel) -> bool {
        self.visited[p.y as usize * self.width + p.x as usize]
    }

    pub fn visited(&self) -> &[bool] {
        &self.visited
    }

    /// Pixels chained while processing the most recent anchor.
    pub fn edge_pixels(&self) -> &[Pixel] {
        &self.edge_pixels
    }

    #[inline]
    fn mark(&mut self, p: Pixel) {
        self.visited[p.y as usize * self.width + p.x as usize] = true;
        self.edge_pixels.push(p);
    }
}

/// Runs the enhanced edge drawing from one anchor and returns every segment
/// fitted along the way, in the order they were opened.
///
/// Two walks leave the anchor in opposite directions. While no segment is
/// open, the last `t_min_length` chained pixels are fitted after every step.
/// Once a segment is open, pixels are added to it until `t_ol` consecutive
/// outliers are exceeded, the edge fades out or a visited pixel is reached.
/// At that point up to three walks are stacked: the orientation change
/// (outlier exit only), the unexplored opposite end of the segment, and a
/// jump over the discontinuity. The jump is on top and is drawn first.
pub fn eed_from_anchor(
    anchor: &Anchor,
    grad: &GradientMap,
    state: &mut DrawState,
    params: &DetectorParams,
) -> Vec<SegmentCandidate> {
    debug_assert_eq!((state.width, state.height), (grad.width(), grad.height()));
    let a = anchor.pixel;
    state.edge_pixels.clear();
    state.stack.clear();
    if !grad.contains(a.x, a.y) || grad.magnitude_at(a.x, a.y) == 0 || state.is_visited(a) {
        return Vec::new();
    }
    state.mark(a);

    let (d1, d2) = Direction::initial_pair(anchor.orient);
    state.stack.push(Branch {
        start: a,
        dir: d1,
        seg: None,
        prefix: Vec::new(),
        landing: false,
        seed: Some(d2),
    });

    let mut segments: Vec<SegmentCandidate> = Vec::new();
    while let Some(branch) = state.stack.pop() {
        match branch.seg {
            Some((idx, end)) => {
                if branch.landing {
                    if state.is_visited(branch.start) {
                        continue;
                    }
                    state.mark(branch.start);
                    segments[idx].add_pixel(branch.start, end, params);
                }
                let (stop, c) = walk_segment(grad, state, &mut segments[idx], end, branch.start, branch.dir, params);
                close_walk(grad, state, &mut segments, idx, end, stop, c, params);
            }
            None => {
                let (c, chain, seg) = walk_free(grad, state, &branch, params);
                match seg {
                    Some(mut seg) => {
                        let reached_start = absorb_prefix(&mut seg, &chain, params);
                        seg.set_explored(SegEnd::Head, false);
                        segments.push(seg);
                        let idx = segments.len() - 1;
                        if branch.seed.is_some() && !reached_start {
                            // Stacked below everything pushed for this segment.
                            state.stack.push(Branch {
                                start: a,
                                dir: d2,
                                seg: None,
                                prefix: Vec::new(),
                                landing: false,
                                seed: None,
                            });
                        }
                        let (stop, c) =
                            walk_segment(grad, state, &mut segments[idx], SegEnd::Tail, c, branch.dir, params);
                        close_walk(grad, state, &mut segments, idx, SegEnd::Tail, stop, c, params);
                    }
                    None => {
                        if let Some(d2) = branch.seed {
                            let mut prefix = chain;
                            prefix.reverse();
                            state.stack.push(Branch {
                                start: a,
                                dir: d2,
                                seg: None,
                                prefix,
                                landing: false,
                                seed: None,
                            });
                        }
                    }
                }
            }
        }
    }
    segments
}

/// Adds the chain pixels drawn before the fitted window to the head of a new
/// segment, newest first, until the outlier budget runs out. Returns whether
/// the head reached the first pixel of the chain.
fn absorb_prefix(seg: &mut SegmentCandidate, chain: &[Pixel], params: &DetectorParams) -> bool {
    let before = chain.len() - seg.len();
    for &p in chain[..before].iter().rev() {
        seg.add_pixel(p, SegEnd::Head, params);
        if seg.outlier_count > params.t_ol {
            break;
        }
    }
    seg.outlier_count = 0;
    seg.end_pixel(SegEnd::Head) == chain[0]
}

/// Walks without a segment, fitting the trailing window after every step.
/// Returns the current pixel, the drawn chain and the segment opened on it;
/// without a segment the walk ran into a weak or visited pixel.
fn walk_free(
    grad: &GradientMap,
    state: &mut DrawState,
    branch: &Branch,
    params: &DetectorParams,
) -> (Pixel, Vec<Pixel>, Option<SegmentCandidate>) {
    let d = branch.dir;
    let (sx, sy) = d.step();
    let mut chain = branch.prefix.clone();
    if chain.last() != Some(&branch.start) {
        chain.push(branch.start);
    }
    let window = params.t_min_length.max(1);
    let first = chain.len().saturating_sub(window);
    let mut sums = LineFit::from_pixels(&chain[first..]);

    let mut cur = branch.start;
    let mut prev = if chain.len() >= 2 {
        chain[chain.len() - 2]
    } else {
        cur.offset(-sx, -sy)
    };
    let mut drift = 0;
    loop {
        let Some(next) = draw_next_pixel(grad, cur, prev, d, drift, None) else {
            return (cur, chain, None);
        };
        if state.is_visited(next) {
            return (cur, chain, None);
        }
        state.mark(next);
        let dd = d.drift(cur, next);
        if dd != 0 {
            drift = dd;
        }
        prev = cur;
        cur = next;
        chain.push(next);
        sums.push(next);
        if chain.len() > window {
            sums.remove(chain[chain.len() - 1 - window]);
        }
        if chain.len() >= window {
            let tail = &chain[chain.len() - window..];
            if let Some(seg) = fit_window(&sums, tail, d, params) {
                return (cur, chain, Some(seg));
            }
        }
    }
}

/// Extends `seg` at `end`, starting from `start` (already part of the
/// segment or of the chain). Returns why the walk stopped and the last drawn
/// pixel.
fn walk_segment(
    grad: &GradientMap,
    state: &mut DrawState,
    seg: &mut SegmentCandidate,
    end: SegEnd,
    start: Pixel,
    dir: Direction,
    params: &DetectorParams,
) -> (Stop, Pixel) {
    let (sx, sy) = dir.step();
    let mut cur = start;
    let mut prev = start.offset(-sx, -sy);
    let mut drift = line_drift(&seg.fit, dir);
    seg.outlier_count = 0;
    loop {
        let Some(next) = draw_next_pixel(grad, cur, prev, dir, drift, Some(&seg.fit)) else {
            return (Stop::WeakEdge, cur);
        };
        if state.is_visited(next) {
            return (Stop::Visited, cur);
        }
        state.mark(next);
        let dd = dir.drift(cur, next);
        if dd != 0 {
            drift = dd;
        }
        prev = cur;
        cur = next;
        seg.add_pixel(next, end, params);
        if seg.outlier_count > params.t_ol {
            return (Stop::Discontinuity, cur);
        }
    }
}

/// Lateral sign of the fitted line relative to `dir`, 0 when parallel.
fn line_drift(fit: &LineFit, dir: Direction) -> i32 {
    let (ux, uy) = fit.direction();
    let (sx, sy) = dir.step();
    let sign = if ux * sx as f64 + uy * sy as f64 >= 0.0 { 1.0 } else { -1.0 };
    let (lx, ly) = dir.lateral();
    let d = sign * (ux * lx as f64 + uy * ly as f64);
    if d.abs() < 1e-9 {
        0
    } else {
        d.signum() as i32
    }
}

/// Stacks the follow-up walks after a segment walk ended at `c`.
#[allow(clippy::too_many_arguments)]
fn close_walk(
    grad: &GradientMap,
    state: &mut DrawState,
    segments: &mut [SegmentCandidate],
    idx: usize,
    end: SegEnd,
    stop: Stop,
    c: Pixel,
    params: &DetectorParams,
) {
    let seg = &mut segments[idx];
    let dir = seg.dir_at(end);

    if stop == Stop::Discontinuity {
        state.stack.push(Branch {
            start: c,
            dir: turn_direction(grad, seg, end, c),
            seg: None,
            prefix: Vec::new(),
            landing: false,
            seed: None,
        });
    }

    let other = end.other();
    if !seg.is_explored(other) {
        seg.set_explored(other, true);
        state.stack.push(Branch {
            start: seg.end_pixel(other),
            dir: seg.dir_at(other),
            seg: Some((idx, other)),
            prefix: Vec::new(),
            landing: false,
            seed: None,
        });
    }

    // A visited pixel is another edge crossing this one, so it is tried as a
    // discontinuity as well.
    if let Some(jump) = can_continue(seg, end, grad, &state.visited, params) {
        let origin = seg.end_pixel(end);
        seg.record_jump(end, origin, &jump.skipped);
        state.stack.push(Branch {
            start: jump.landing,
            dir,
            seg: Some((idx, end)),
            prefix: Vec::new(),
            landing: true,
            seed: None,
        });
    }
}

/// Direction to follow the edge that made the segment walk stop at `c`:
/// the same direction if `c`'s orientation still matches it, otherwise the
/// lateral side `c` drifted to.
fn turn_direction(grad: &GradientMap, seg: &SegmentCandidate, end: SegEnd, c: Pixel) -> Direction {
    let dir = seg.dir_at(end);
    if dir.follows(grad.orientation(c.x as usize, c.y as usize)) {
        return dir;
    }
    let last = seg.end_pixel(end);
    let (lx, ly) = dir.lateral();
    let mut side = ((c.x - last.x) * lx + (c.y - last.y) * ly).signum();
    if side == 0 {
        let plus = grad.magnitude_at(c.x + lx, c.y + ly);
        let minus = grad.magnitude_at(c.x - lx, c.y - ly);
        side = if plus >= minus { 1 } else { -1 };
    }
    match (dir.is_horizontal(), side > 0) {
        (true, true) => Direction::Down,
        (true, false) => Direction::Up,
        (false, true) => Direction::Right,
        (false, false) => Direction::Left,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anchors::extract_anchors;
    use crate::imgproc::{compute_gradient, gaussian_blur, EdgeOrientation, GrayImage};

    fn gradient(img: &GrayImage) -> GradientMap {
        compute_gradient(&gaussian_blur(img, 5, 1.0).unwrap(), 30).unwrap()
    }

    fn anchor_at(grad: &GradientMap, x: i32, y: i32) -> Anchor {
        Anchor {
            pixel: Pixel::new(x, y),
            orient: grad.orientation(x as usize, y as usize),
            magnitude: grad.magnitude_at(x, y),
        }
    }

    /// Dark half-plane below row `y0` between columns `x0..x1`, bright
    /// elsewhere: one horizontal step edge of length `x1 - x0`.
    fn step_rows(w: usize, h: usize, x0: usize, x1: usize, y0: usize) -> GrayImage {
        GrayImage::from_fn(w, h, |x, y| if (x0..x1).contains(&x) && y >= y0 { 40 } else { 200 }).unwrap()
    }

    #[test]
    fn isolated_line_gives_one_segment() {
        // 40-px step edge terminated by weak gradient on both sides.
        let img = GrayImage::from_fn(80, 40, |x, y| {
            if (20..60).contains(&x) && y >= 20 {
                90
            } else {
                128
            }
        })
        .unwrap();
        let grad = gradient(&img);
        let mut state = DrawState::new(80, 40);
        // The anchor sits on the stronger side of the blurred edge.
        let y = if grad.magnitude(40, 19) >= grad.magnitude(40, 20) { 19 } else { 20 };
        let anchor = anchor_at(&grad, 40, y);
        assert_eq!(anchor.orient, EdgeOrientation::Horizontal);
        let segs = eed_from_anchor(&anchor, &grad, &mut state, &DetectorParams::default());
        let long: Vec<_> = segs.iter().filter(|s| s.len() >= 30).collect();
        assert_eq!(long.len(), 1, "segments: {:?}", segs.iter().map(|s| s.endpoints()).collect::<Vec<_>>());
        let ((x0, y0), (x1, y1)) = long[0].endpoints();
        let (lo, hi) = (x0.min(x1), x0.max(x1));
        assert!((y0 - y1).abs() < 1.0);
        assert!((lo - 20.0).abs() <= 2.5 && (hi - 59.0).abs() <= 2.5, "{lo} {hi}");
    }

    #[test]
    fn visited_anchor_yields_nothing() {
        let img = step_rows(60, 30, 5, 55, 15);
        let grad = gradient(&img);
        let mut state = DrawState::new(60, 30);
        let params = DetectorParams::default();
        let anchors = extract_anchors(&grad, params.t_anchor, params.scan_interval);
        assert!(!anchors.is_empty());
        let first = eed_from_anchor(&anchors[0], &grad, &mut state, &params);
        assert!(!first.is_empty());
        // Every anchor on the drawn edge is now visited.
        let on_edge = anchors.iter().find(|a| state.is_visited(a.pixel)).unwrap();
        assert!(eed_from_anchor(on_edge, &grad, &mut state, &params).is_empty());
    }

    #[test]
    fn chains_are_connected_and_distinct() {
        let img = GrayImage::from_fn(90, 90, |x, y| {
            let (dx, dy) = (x as f64 - 45.0, y as f64 - 45.0);
            if dx.abs() + 0.6 * dy.abs() < 30.0 {
                60
            } else {
                190
            }
        })
        .unwrap();
        let grad = gradient(&img);
        let params = DetectorParams::default();
        let mut state = DrawState::new(90, 90);
        let mut all = Vec::new();
        for a in extract_anchors(&grad, params.t_anchor, params.scan_interval) {
            all.extend(eed_from_anchor(&a, &grad, &mut state, &params));
        }
        assert!(all.len() >= 4);
        let mut seen = std::collections::HashSet::new();
        for s in &all {
            for p in &s.pixels {
                assert!(seen.insert(*p), "pixel {p:?} in two segments");
                assert!(grad.magnitude_at(p.x, p.y) > 0);
            }
        }
    }

    #[test]
    fn jump_merges_broken_line() {
        // Horizontal step edge hidden under a mid-gray block in the middle.
        let img = GrayImage::from_fn(120, 40, |x, y| {
            if (57..63).contains(&x) && (14..26).contains(&y) {
                return 120;
            }
            if (10..110).contains(&x) && y >= 20 {
                40
            } else {
                200
            }
        })
        .unwrap();
        let grad = gradient(&img);
        let run = |params: &DetectorParams| {
            let mut state = DrawState::new(120, 40);
            let mut out = Vec::new();
            for a in extract_anchors(&grad, params.t_anchor, params.scan_interval) {
                out.extend(eed_from_anchor(&a, &grad, &mut state, params));
            }
            out.into_iter().filter(|s| s.len() >= 30).count()
        };
        let mut params = DetectorParams::default();
        assert_eq!(run(&params), 1);
        params.jumps_enabled = false;
        assert_eq!(run(&params), 2);
    }
}
