//! Fingerprint image processing: enhancement, binarization, thinning and
//! crossing-number minutiae extraction.
//!
//! Every stage is a pure function over immutable images, so the whole
//! pipeline is deterministic for a fixed input.

mod binarize;
mod enhance;
mod extract;
mod image;
mod io;
mod thin;

pub use self::binarize::{binarize, DEFAULT_BINARIZE_WINDOW};
pub use self::enhance::{contrast_stretch, enhance, equalize_histogram, median_filter, resize_nearest};
pub use self::extract::{
    crossing_number, extract_minutiae, extract_minutiae_with_block, remove_spurious,
    DEFAULT_BORDER, DEFAULT_MIN_DIST, DEFAULT_ORIENTATION_BLOCK,
};
pub use self::image::{BinaryImage, GrayImage};
pub use self::io::{format_minutiae, load_gray_image, load_minutiae, parse_minutiae};
pub use self::thin::thin;

use std::f64::consts::TAU;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MinutiaeError {
    #[error("invalid image dimensions {width}x{height}")]
    Dimension { width: usize, height: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {message}")]
    Validation { line: usize, message: String },
    #[error("image decode failed: {0}")]
    Decode(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MinutiaKind {
    RidgeEnding,
    Bifurcation,
}

impl MinutiaKind {
    pub fn code(self) -> char {
        match self {
            MinutiaKind::RidgeEnding => 'E',
            MinutiaKind::Bifurcation => 'B',
        }
    }
}

impl fmt::Display for MinutiaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// A single ridge feature. `theta` is always kept in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minutia {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub kind: MinutiaKind,
}

impl Minutia {
    pub fn new(x: f64, y: f64, theta: f64, kind: MinutiaKind) -> Self {
        Minutia { x, y, theta: normalize_angle(theta), kind }
    }

    pub fn distance(&self, other: &Minutia) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Settings for the image → minutiae pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub binarize_window: usize,
    pub orientation_block: usize,
    pub min_dist: f64,
    pub border: f64,
    /// Upscale to 400×400 before enhancement (small-sensor images).
    pub resize: bool,
    /// Ridges are darker than valleys in the input image.
    pub dark_ridges: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            binarize_window: DEFAULT_BINARIZE_WINDOW,
            orientation_block: DEFAULT_ORIENTATION_BLOCK,
            min_dist: DEFAULT_MIN_DIST,
            border: DEFAULT_BORDER,
            resize: false,
            dark_ridges: true,
        }
    }
}

pub const RESIZE_TARGET: usize = 400;

/// Runs the full image pipeline and returns the cleaned minutiae.
pub fn minutiae_from_image(img: &GrayImage, cfg: &PipelineConfig) -> Result<Vec<Minutia>, MinutiaeError> {
    let resized;
    let src = if cfg.resize {
        resized = resize_nearest(img, RESIZE_TARGET, RESIZE_TARGET)?;
        &resized
    } else {
        img
    };
    let mut enhanced = enhance(src)?;
    if cfg.dark_ridges {
        enhanced = enhanced.inverted();
    }
    let bin = binarize(&enhanced, cfg.binarize_window)?;
    let skel = thin(&bin);
    let raw = extract_minutiae_with_block(&skel, cfg.orientation_block);
    Ok(remove_spurious(&raw, &skel, cfg.min_dist, cfg.border))
}
