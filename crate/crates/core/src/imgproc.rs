//! Raster containers and the low-level image operators used by the detector:
//! fixed-point Gaussian smoothing, 3x3 Sobel gradients, L1 magnitude with
//! weak-edge suppression and the two-way orientation quantization.

use crate::error::{Error, Result};

/// 8-bit grayscale raster, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage { width, height });
        }
        if data.len() != width * height {
            return Err(Error::BufferSize {
                expected: width * height,
                actual: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.data[y * self.width + x] = value;
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_raw(self) -> Vec<u8> {
        self.data
    }
}

/// Quantized edge orientation. A vertical edge has a mostly horizontal
/// gradient (`|gx| >= |gy|`); ties are labeled vertical.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeOrientation {
    Vertical,
    Horizontal,
}

impl EdgeOrientation {
    #[inline]
    pub fn from_gradient(gx: i32, gy: i32) -> Self {
        if gx.abs() >= gy.abs() {
            EdgeOrientation::Vertical
        } else {
            EdgeOrientation::Horizontal
        }
    }
}

/// Per-pixel Sobel responses, thresholded L1 magnitude and quantized orientation.
#[derive(Clone, Debug)]
pub struct GradientMap {
    width: usize,
    height: usize,
    gx: Vec<i16>,
    gy: Vec<i16>,
    g: Vec<u16>,
    orient: Vec<EdgeOrientation>,
}

impl GradientMap {
    /// Builds a map from raw Sobel components. The magnitude is derived as
    /// `|gx| + |gy|` and suppressed below `t_grad`; orientation follows the
    /// components. The one-pixel border ring is forced to zero.
    pub fn from_components(
        width: usize,
        height: usize,
        gx: Vec<i16>,
        gy: Vec<i16>,
        t_grad: u16,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage { width, height });
        }
        let n = width * height;
        if gx.len() != n || gy.len() != n {
            return Err(Error::BufferSize {
                expected: n,
                actual: gx.len().min(gy.len()),
            });
        }
        let mut map = Self {
            width,
            height,
            g: vec![0; n],
            orient: vec![EdgeOrientation::Vertical; n],
            gx,
            gy,
        };
        for y in 0..height {
            for x in 0..width {
                let i = y * width + x;
                if x == 0 || y == 0 || x + 1 == width || y + 1 == height {
                    map.gx[i] = 0;
                    map.gy[i] = 0;
                }
                let (cx, cy) = (map.gx[i] as i32, map.gy[i] as i32);
                map.g[i] = (cx.abs() + cy.abs()) as u16;
                map.orient[i] = EdgeOrientation::from_gradient(cx, cy);
            }
        }
        map.suppress_weak(t_grad);
        Ok(map)
    }

    /// Zeroes every magnitude below `t_grad`. Idempotent.
    pub fn suppress_weak(&mut self, t_grad: u16) {
        for g in &mut self.g {
            if *g < t_grad {
                *g = 0;
            }
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn contains(&self, x: i32, y: i32) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    /// Thresholded L1 magnitude at `(x, y)`.
    #[inline]
    pub fn magnitude(&self, x: usize, y: usize) -> u16 {
        self.g[y * self.width + x]
    }

    /// Magnitude at signed coordinates; zero outside the image.
    #[inline]
    pub fn magnitude_at(&self, x: i32, y: i32) -> u16 {
        if self.contains(x, y) {
            self.g[y as usize * self.width + x as usize]
        } else {
            0
        }
    }

    #[inline]
    pub fn gx(&self, x: usize, y: usize) -> i16 {
        self.gx[y * self.width + x]
    }

    #[inline]
    pub fn gy(&self, x: usize, y: usize) -> i16 {
        self.gy[y * self.width + x]
    }

    #[inline]
    pub fn orientation(&self, x: usize, y: usize) -> EdgeOrientation {
        self.orient[y * self.width + x]
    }

    pub fn magnitudes(&self) -> &[u16] {
        &self.g
    }

    pub fn gx_data(&self) -> &[i16] {
        &self.gx
    }

    pub fn gy_data(&self) -> &[i16] {
        &self.gy
    }
}

const KERNEL_BITS: u32 = 10;
const KERNEL_ONE: u32 = 1 << KERNEL_BITS;

/// Fixed-point (Q10) 1-D Gaussian kernel whose taps sum to exactly 1024.
pub fn gaussian_kernel(kernel_size: usize, sigma: f64) -> Result<Vec<u32>> {
    if kernel_size < 3 || kernel_size.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "kernel size must be odd and >= 3, got {kernel_size}"
        )));
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!("sigma must be > 0, got {sigma}")));
    }
    let radius = (kernel_size / 2) as f64;
    let weights: Vec<f64> = (0..kernel_size)
        .map(|i| {
            let d = i as f64 - radius;
            (-d * d / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let total: f64 = weights.iter().sum();
    let mut taps: Vec<u32> = weights
        .iter()
        .map(|w| (w / total * KERNEL_ONE as f64).round() as u32)
        .collect();
    // Rounding drift goes to the center tap so the kernel stays normalized.
    let sum: i64 = taps.iter().map(|&t| t as i64).sum();
    let center = kernel_size / 2;
    taps[center] = (taps[center] as i64 + KERNEL_ONE as i64 - sum) as u32;
    Ok(taps)
}

/// Separable Gaussian smoothing with replicated borders.
pub fn gaussian_blur(img: &GrayImage, kernel_size: usize, sigma: f64) -> Result<GrayImage> {
    let taps = gaussian_kernel(kernel_size, sigma)?;
    let (w, h) = (img.width(), img.height());
    if w == 0 || h == 0 {
        return Err(Error::EmptyImage { width: w, height: h });
    }
    let r = (kernel_size / 2) as isize;
    let clamp = |v: isize, n: usize| v.clamp(0, n as isize - 1) as usize;

    let src = img.data();
    let n = taps.len();
    let mut rows = vec![0u32; w * h];
    for y in 0..h {
        let line = &src[y * w..(y + 1) * w];
        let out = &mut rows[y * w..(y + 1) * w];
        let tap_sum = |x: usize| -> u32 {
            taps.iter()
                .enumerate()
                .map(|(k, &t)| t * line[clamp(x as isize + k as isize - r, w)] as u32)
                .sum()
        };
        if w >= n {
            let r = r as usize;
            for x in (0..r).chain(w - r..w) {
                out[x] = tap_sum(x);
            }
            for (x, o) in out.iter_mut().enumerate().take(w - r).skip(r) {
                let window = &line[x - r..x - r + n];
                *o = taps.iter().zip(window).map(|(&t, &v)| t * v as u32).sum();
            }
        } else {
            for (x, o) in out.iter_mut().enumerate() {
                *o = tap_sum(x);
            }
        }
    }

    let mut data = vec![0u8; w * h];
    let half = 1u32 << (2 * KERNEL_BITS - 1);
    let mut acc = vec![0u32; w];
    for y in 0..h {
        acc.fill(half);
        for (k, &t) in taps.iter().enumerate() {
            let row = &rows[clamp(y as isize + k as isize - r, h) * w..][..w];
            for (a, &v) in acc.iter_mut().zip(row) {
                *a += t * v;
            }
        }
        for (d, &a) in data[y * w..(y + 1) * w].iter_mut().zip(&acc) {
            *d = (a >> (2 * KERNEL_BITS)).min(255) as u8;
        }
    }
    GrayImage::new(w, h, data)
}

/// 3x3 Sobel gradients, L1 magnitude thresholded at `t_grad`, quantized
/// orientation. The outermost ring of pixels has zero gradient.
pub fn compute_gradient(img: &GrayImage, t_grad: u16) -> Result<GradientMap> {
    let (w, h) = (img.width(), img.height());
    if w < 3 || h < 3 {
        return Err(Error::ImageTooSmall {
            width: w,
            height: h,
            min_width: 3,
            min_height: 3,
        });
    }
    let src = img.data();
    let mut gx = vec![0i16; w * h];
    let mut gy = vec![0i16; w * h];
    for y in 1..h - 1 {
        let up = &src[(y - 1) * w..y * w];
        let mid = &src[y * w..(y + 1) * w];
        let down = &src[(y + 1) * w..(y + 2) * w];
        for x in 1..w - 1 {
            let p = |row: &[u8], dx: usize| row[x + dx - 1] as i32;
            let dx = (p(up, 2) + 2 * p(mid, 2) + p(down, 2)) - (p(up, 0) + 2 * p(mid, 0) + p(down, 0));
            let dy = (p(down, 0) + 2 * p(down, 1) + p(down, 2)) - (p(up, 0) + 2 * p(up, 1) + p(up, 2));
            gx[y * w + x] = dx as i16;
            gy[y * w + x] = dy as i16;
        }
    }
    GradientMap::from_components(w, h, gx, gy, t_grad)
}
