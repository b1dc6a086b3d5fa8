//! Enhanced edge drawing: walks from anchors along edge pixels, fitting line
//! segments while it draws, and jumps over validated discontinuities.

mod bresenham;
mod draw;
mod drawer;
mod fit;
mod jump;
mod segment;

pub use bresenham::bresenham;
pub use draw::draw_next_pixel;
pub use drawer::{eed_from_anchor, DrawState};
pub use fit::{FitAxis, LineFit};
pub use jump::{can_continue, eigen_check, Jump};
pub use segment::{fit_new_segment, PixelVerdict, SegEnd, SegmentCandidate};

use crate::imgproc::EdgeOrientation;

/// Integer pixel coordinates; x grows rightwards, y downwards.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pixel {
    pub x: i32,
    pub y: i32,
}

impl Pixel {
    #[inline]
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn offset(self, dx: i32, dy: i32) -> Self {
        Self::new(self.x + dx, self.y + dy)
    }

    /// True for the 8 neighbours (not the pixel itself).
    #[inline]
    pub fn is_adjacent(self, other: Pixel) -> bool {
        let (dx, dy) = ((self.x - other.x).abs(), (self.y - other.y).abs());
        dx <= 1 && dy <= 1 && (dx, dy) != (0, 0)
    }
}

/// Walking direction of the drawing process.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Up,
    Down,
    Left,
    Right,
}

impl Direction {
    #[inline]
    pub fn step(self) -> (i32, i32) {
        match self {
            Direction::Up => (0, -1),
            Direction::Down => (0, 1),
            Direction::Left => (-1, 0),
            Direction::Right => (1, 0),
        }
    }

    /// Unit vector perpendicular to the walk; `+1` drift moves along it.
    #[inline]
    pub fn lateral(self) -> (i32, i32) {
        match self {
            Direction::Up | Direction::Down => (1, 0),
            Direction::Left | Direction::Right => (0, 1),
        }
    }

    #[inline]
    pub fn reverse(self) -> Self {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }

    #[inline]
    pub fn is_horizontal(self) -> bool {
        matches!(self, Direction::Left | Direction::Right)
    }

    /// Horizontal walks follow horizontal edges, vertical walks vertical ones.
    #[inline]
    pub fn follows(self, orient: EdgeOrientation) -> bool {
        self.is_horizontal() == (orient == EdgeOrientation::Horizontal)
    }

    /// The two walks started from an anchor with the given orientation.
    pub fn initial_pair(orient: EdgeOrientation) -> (Direction, Direction) {
        match orient {
            EdgeOrientation::Vertical => (Direction::Up, Direction::Down),
            EdgeOrientation::Horizontal => (Direction::Left, Direction::Right),
        }
    }

    /// Lateral component (`-1`, `0` or `1`) of the move `from -> to`.
    #[inline]
    pub fn drift(self, from: Pixel, to: Pixel) -> i32 {
        let (lx, ly) = self.lateral();
        ((to.x - from.x) * lx + (to.y - from.y) * ly).signum()
    }
}
