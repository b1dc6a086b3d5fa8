//! Line segment detection by enhanced edge drawing, plus the tooling to
//! evaluate detectors: optimal segment matching, precision/recall/IoU/AP and
//! homography-based repeatability.
//!
//! ```no_run
//! use elsed::{detect, segio, DetectorParams};
//!
//! let img = segio::load_image("scene.pgm")?;
//! for s in detect(&img, &DetectorParams::default())? {
//!     println!("{:?} -> {:?} score {:.2}", s.segment.a, s.segment.b, s.score);
//! }
//! # Ok::<(), elsed::Error>(())
//! ```

pub mod anchors;
pub mod cli;
pub mod detector;
pub mod eed;
mod error;
pub mod eval;
pub mod geometry;
pub mod imgproc;
pub mod segio;
pub mod synth;
pub mod validate;

pub use detector::{detect, detect_all, detect_with_timings, DetectorParams};
pub use error::{Error, Result};
pub use geometry::{Point, Segment};
pub use imgproc::GrayImage;
pub use validate::ValidatedSegment;
