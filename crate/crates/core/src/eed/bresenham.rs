use super::Pixel;

/// Integer Bresenham rasterization from `p0` to `p1`, both endpoints included.
pub fn bresenham(p0: Pixel, p1: Pixel) -> Vec<Pixel> {
    let dx = (p1.x - p0.x).abs();
    let dy = -(p1.y - p0.y).abs();
    let sx = if p0.x < p1.x { 1 } else { -1 };
    let sy = if p0.y < p1.y { 1 } else { -1 };
    let mut err = dx + dy;
    let (mut x, mut y) = (p0.x, p0.y);
    let mut out = Vec::with_capacity(dx.max(-dy) as usize + 1);
    loop {
        out.push(Pixel::new(x, y));
        if x == p1.x && y == p1.y {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
    out
}
