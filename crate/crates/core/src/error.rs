//! Crate-wide error type.

use crate::config::TransformMode;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Two planes that must align do not.
    #[error("dimension mismatch: {left_width}x{left_height} vs {right_width}x{right_height}")]
    DimensionMismatch {
        left_width: usize,
        left_height: usize,
        right_width: usize,
        right_height: usize,
    },

    #[error("invalid image dimensions {width}x{height}: both axes must be >= 1")]
    InvalidDimensions { width: usize, height: usize },

    #[error("pixel buffer holds {got} values but {expected} are required")]
    BufferSize { expected: usize, got: usize },

    #[error("pixel data contains a non-finite value at index {index}")]
    NonFinitePixel { index: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The requested scale count leaves the coarsest level smaller than the window.
    #[error(
        "image {width}x{height} too small: level {scales} would be \
         {level_width}x{level_height}, below the {window}x{window} window"
    )]
    ImageTooSmall {
        width: usize,
        height: usize,
        scales: usize,
        window: usize,
        level_width: usize,
        level_height: usize,
    },

    #[error("plane {width}x{height} is smaller than the {window}x{window} window")]
    PlaneSmallerThanWindow {
        width: usize,
        height: usize,
        window: usize,
    },

    #[error("operation requires a {expected:?} pyramid, got {got:?}")]
    PyramidModeMismatch {
        expected: TransformMode,
        got: TransformMode,
    },

    #[error("pyramid has {levels} levels but {weights} scale weights were supplied")]
    LevelCountMismatch { levels: usize, weights: usize },

    #[error("histogram is empty; entropy is undefined")]
    EmptyHistogram,

    #[error("input contains a non-finite value at index {index}")]
    NonFiniteInput { index: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least {min} samples, got {n}")]
    TooFewSamples { n: usize, min: usize },

    /// A constant series has no rank order; correlation against it is undefined.
    #[error("correlation is undefined for constant input")]
    ConstantInput,

    #[error("a reference image is required for this scoring mode")]
    MissingReference,

    #[error("manifest line {line}: {message}")]
    Manifest { line: u64, message: String },

    #[error("manifest line {line}: duplicate test_path {path}")]
    DuplicateTestPath { line: u64, path: String },

    #[error("batch contains no entries")]
    EmptyBatch,

    #[error("no entry could be scored; all {failed} entries failed")]
    NoEntriesScored { failed: usize },

    #[error("unsupported image format for {path} (expected .png or .bmp)")]
    UnsupportedFormat { path: String },

    #[error("failed to decode {path}: {source}")]
    ImageDecode {
        path: String,
        source: image::ImageError,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
