use super::fit::dominant_axis;
use super::{Direction, LineFit, Pixel};
use crate::detector::DetectorParams;

/// One of the two ends of a segment under construction. `Tail` is the end
/// reached by walking the segment's forward direction, `Head` the other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SegEnd {
    Head,
    Tail,
}

impl SegEnd {
    #[inline]
    pub fn other(self) -> Self {
        match self {
            SegEnd::Head => SegEnd::Tail,
            SegEnd::Tail => SegEnd::Head,
        }
    }

    #[inline]
    fn index(self) -> usize {
        match self {
            SegEnd::Head => 0,
            SegEnd::Tail => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PixelVerdict {
    Inlier,
    Outlier,
}

/// A line segment being drawn: its incremental fit, supporting inliers and
/// bookkeeping for the two ends.
#[derive(Clone, Debug)]
pub struct SegmentCandidate {
    pub fit: LineFit,
    /// Inlier pixels in insertion order.
    pub pixels: Vec<Pixel>,
    /// Pixels rasterized across accepted jumps (not inliers).
    pub jumped: Vec<Pixel>,
    /// Consecutive outliers seen at the end currently being extended.
    pub outlier_count: usize,
    /// Walking direction from head to tail.
    pub dir: Direction,
    ends: [Pixel; 2],
    explored: [bool; 2],
    last_jump_origin: [Option<Pixel>; 2],
}

impl SegmentCandidate {
    pub(crate) fn from_fit(fit: LineFit, pixels: Vec<Pixel>, dir: Direction) -> Self {
        let ends = [pixels[0], *pixels.last().unwrap()];
        Self {
            fit,
            pixels,
            jumped: Vec::new(),
            outlier_count: 0,
            dir,
            ends,
            explored: [false, true],
            last_jump_origin: [None, None],
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    #[inline]
    pub fn end_pixel(&self, end: SegEnd) -> Pixel {
        self.ends[end.index()]
    }

    /// Direction to walk when extending past `end`.
    #[inline]
    pub fn dir_at(&self, end: SegEnd) -> Direction {
        match end {
            SegEnd::Tail => self.dir,
            SegEnd::Head => self.dir.reverse(),
        }
    }

    pub(crate) fn is_explored(&self, end: SegEnd) -> bool {
        self.explored[end.index()]
    }

    pub(crate) fn set_explored(&mut self, end: SegEnd, value: bool) {
        self.explored[end.index()] = value;
    }

    pub(crate) fn last_jump_origin(&self, end: SegEnd) -> Option<Pixel> {
        self.last_jump_origin[end.index()]
    }

    pub(crate) fn record_jump(&mut self, end: SegEnd, origin: Pixel, skipped: &[Pixel]) {
        self.last_jump_origin[end.index()] = Some(origin);
        self.jumped.extend_from_slice(skipped);
        self.outlier_count = 0;
    }

    pub fn is_inlier(&self, p: Pixel, params: &DetectorParams) -> bool {
        self.fit.distance(p.x as f64, p.y as f64) <= params.t_px_to_seg_dist
    }

    /// Adds `p` at `end` if it lies within the inlier distance of the line,
    /// otherwise counts it as a consecutive outlier.
    pub fn add_pixel(&mut self, p: Pixel, end: SegEnd, params: &DetectorParams) -> PixelVerdict {
        if self.is_inlier(p, params) {
            self.fit.push(p);
            self.pixels.push(p);
            self.ends[end.index()] = p;
            self.outlier_count = 0;
            PixelVerdict::Inlier
        } else {
            self.outlier_count += 1;
            PixelVerdict::Outlier
        }
    }

    /// Endpoints: head and tail inliers projected onto the fitted line.
    pub fn endpoints(&self) -> ((f64, f64), (f64, f64)) {
        let [h, t] = self.ends;
        (
            self.fit.project(h.x as f64, h.y as f64),
            self.fit.project(t.x as f64, t.y as f64),
        )
    }
}

/// Tries to open a segment over `pixels`: needs at least `t_min_length`
/// pixels, a mean squared residual within `t_line_fit_err` and every pixel
/// within the inlier distance.
pub fn fit_new_segment(pixels: &[Pixel], dir: Direction, params: &DetectorParams) -> Option<SegmentCandidate> {
    if pixels.is_empty() || pixels.len() < params.t_min_length {
        return None;
    }
    let fit = LineFit::from_pixels(pixels);
    accept_fit(fit, pixels, params).then(|| SegmentCandidate::from_fit(fit, pixels.to_vec(), dir))
}

/// Same as [`fit_new_segment`] but reuses already accumulated sums for
/// `pixels`; only the axis is recomputed.
pub(crate) fn fit_window(
    sums: &LineFit,
    pixels: &[Pixel],
    dir: Direction,
    params: &DetectorParams,
) -> Option<SegmentCandidate> {
    if pixels.len() < params.t_min_length {
        return None;
    }
    let mut fit = *sums;
    fit.axis = dominant_axis(pixels);
    accept_fit(fit, pixels, params).then(|| SegmentCandidate::from_fit(fit, pixels.to_vec(), dir))
}

fn accept_fit(fit: LineFit, pixels: &[Pixel], params: &DetectorParams) -> bool {
    fit.fit_error() <= params.t_line_fit_err
        && pixels
            .iter()
            .all(|p| fit.distance(p.x as f64, p.y as f64) <= params.t_px_to_seg_dist)
}
