use super::Pixel;

/// Which coordinate is treated as the independent variable of the fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FitAxis {
    /// `y` regressed on `x`; for lines closer to horizontal.
    Horizontal,
    /// `x` regressed on `y`; for lines closer to vertical.
    Vertical,
}

/// Oriented least-squares line fit over integer pixels.
///
/// The accumulators are exact integer sums, so adding pixels one at a time
/// gives bit-identical state to a batch fit over the same pixels. The line
/// `a*x + b*y + c = 0` comes from the closed form
///
/// ```text
/// a = N*Sxy - Sx*Sy
/// b = Sx^2 - N*Sxx
/// c = Sy*Sxx - Sx*Sxy
/// ```
///
/// for [`FitAxis::Horizontal`], with `x` and `y` exchanged for
/// [`FitAxis::Vertical`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LineFit {
    pub n: i64,
    pub sum_x: i64,
    pub sum_y: i64,
    pub sum_xx: i64,
    pub sum_yy: i64,
    pub sum_xy: i64,
    pub axis: FitAxis,
}

impl LineFit {
    pub fn new(axis: FitAxis) -> Self {
        Self {
            n: 0,
            sum_x: 0,
            sum_y: 0,
            sum_xx: 0,
            sum_yy: 0,
            sum_xy: 0,
            axis,
        }
    }

    /// Batch fit; the axis follows the larger side of the bounding box
    /// (ties go to [`FitAxis::Horizontal`]).
    pub fn from_pixels(pixels: &[Pixel]) -> Self {
        let mut fit = Self::new(dominant_axis(pixels));
        for &p in pixels {
            fit.push(p);
        }
        fit
    }

    #[inline]
    pub fn push(&mut self, p: Pixel) {
        let (x, y) = (p.x as i64, p.y as i64);
        self.n += 1;
        self.sum_x += x;
        self.sum_y += y;
        self.sum_xx += x * x;
        self.sum_yy += y * y;
        self.sum_xy += x * y;
    }

    #[inline]
    pub fn remove(&mut self, p: Pixel) {
        let (x, y) = (p.x as i64, p.y as i64);
        self.n -= 1;
        self.sum_x -= x;
        self.sum_y -= y;
        self.sum_xx -= x * x;
        self.sum_yy -= y * y;
        self.sum_xy -= x * y;
    }

    /// Accumulators as (independent, dependent) sums for the current axis:
    /// `(n, su, sv, suu, svv, suv)`.
    fn oriented(&self) -> (i128, i128, i128, i128, i128, i128) {
        let n = self.n as i128;
        match self.axis {
            FitAxis::Horizontal => (
                n,
                self.sum_x as i128,
                self.sum_y as i128,
                self.sum_xx as i128,
                self.sum_yy as i128,
                self.sum_xy as i128,
            ),
            FitAxis::Vertical => (
                n,
                self.sum_y as i128,
                self.sum_x as i128,
                self.sum_yy as i128,
                self.sum_xx as i128,
                self.sum_xy as i128,
            ),
        }
    }

    /// Exact integer line coefficients `(a, b, c)` of `a*x + b*y + c = 0`.
    pub fn coefficients_exact(&self) -> (i128, i128, i128) {
        let (n, su, sv, suu, _, suv) = self.oriented();
        let a = n * suv - su * sv;
        let b = su * su - n * suu;
        let c = sv * suu - su * suv;
        match self.axis {
            FitAxis::Horizontal => (a, b, c),
            FitAxis::Vertical => (b, a, c),
        }
    }

    pub fn coefficients(&self) -> (f64, f64, f64) {
        let (a, b, c) = self.coefficients_exact();
        (a as f64, b as f64, c as f64)
    }

    /// Unit normal `(a, b) / |(a, b)|`.
    pub fn normal(&self) -> (f64, f64) {
        let (a, b, _) = self.coefficients();
        let norm = a.hypot(b);
        if norm == 0.0 {
            return match self.axis {
                FitAxis::Horizontal => (0.0, 1.0),
                FitAxis::Vertical => (1.0, 0.0),
            };
        }
        (a / norm, b / norm)
    }

    /// Unit direction along the line (normal rotated by 90 degrees).
    pub fn direction(&self) -> (f64, f64) {
        let (nx, ny) = self.normal();
        (-ny, nx)
    }

    /// Mean squared residual along the dependent axis, in px^2.
    pub fn fit_error(&self) -> f64 {
        let (n, su, sv, suu, svv, suv) = self.oriented();
        let duu = n * suu - su * su;
        if n == 0 || duu == 0 {
            return f64::INFINITY;
        }
        let dvv = n * svv - sv * sv;
        let duv = n * suv - su * sv;
        let num = dvv * duu - duv * duv;
        num as f64 / (duu as f64 * (n * n) as f64)
    }

    /// Euclidean distance from `(x, y)` to the fitted line.
    pub fn distance(&self, x: f64, y: f64) -> f64 {
        let (a, b, c) = self.coefficients();
        let norm = a.hypot(b);
        if norm == 0.0 {
            return f64::INFINITY;
        }
        (a * x + b * y + c).abs() / norm
    }

    /// Signed distance, positive on the side the normal points to.
    pub fn signed_distance(&self, x: f64, y: f64) -> f64 {
        let (a, b, c) = self.coefficients();
        let norm = a.hypot(b);
        if norm == 0.0 {
            return 0.0;
        }
        (a * x + b * y + c) / norm
    }

    /// Orthogonal projection of `(x, y)` onto the line.
    pub fn project(&self, x: f64, y: f64) -> (f64, f64) {
        let d = self.signed_distance(x, y);
        let (nx, ny) = self.normal();
        (x - d * nx, y - d * ny)
    }
}

/// [`FitAxis::Horizontal`] when the bounding box is at least as wide as tall.
pub(crate) fn dominant_axis(pixels: &[Pixel]) -> FitAxis {
    let Some(first) = pixels.first() else {
        return FitAxis::Horizontal;
    };
    let (mut x0, mut x1, mut y0, mut y1) = (first.x, first.x, first.y, first.y);
    for p in pixels {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    if x1 - x0 >= y1 - y0 {
        FitAxis::Horizontal
    } else {
        FitAxis::Vertical
    }
}
