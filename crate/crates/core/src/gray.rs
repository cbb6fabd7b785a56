//! Single-channel intensity planes.
//!
//! All metrics operate on `GrayImage`: a row-major `f64` plane with a
//! nominal [0, 255] range. Color input is reduced to BT.601 luma before
//! any measurement so that the stabilizing constants stay in 8-bit units.

use crate::error::{Error, Result};

/// BT.601 luma coefficients.
const LUMA_R: f64 = 0.299;
const LUMA_G: f64 = 0.587;
const LUMA_B: f64 = 0.114;

/// A single-channel floating-point image, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl GrayImage {
    /// Builds an image from raw row-major samples.
    ///
    /// Fails when either axis is zero, the buffer length is not
    /// `width * height`, or any sample is NaN/infinite.
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions { width, height });
        }
        let expected = width
            .checked_mul(height)
            .ok_or(Error::InvalidDimensions { width, height })?;
        if data.len() != expected {
            return Err(Error::BufferSize {
                expected,
                got: data.len(),
            });
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinitePixel { index });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Internal constructor for planes produced by already-validated
    /// arithmetic on finite inputs. Skips the O(n) finiteness scan.
    pub(crate) fn from_raw(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert!(width >= 1 && height >= 1);
        debug_assert_eq!(data.len(), width * height);
        debug_assert!(data.iter().all(|v| v.is_finite()));
        Self {
            width,
            height,
            data,
        }
    }

    /// An image with every sample equal to `value`.
    pub fn constant(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Sample at column `x`, row `y`. Panics out of bounds.
    pub fn get(&self, x: usize, y: usize) -> f64 {
        assert!(x < self.width && y < self.height);
        self.data[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }
}

/// Reduces an RGB triplet of planes to BT.601 luma.
///
/// All three planes must share dimensions; the output inherits them.
pub fn to_gray(r: &GrayImage, g: &GrayImage, b: &GrayImage) -> Result<GrayImage> {
    validate_pair(r, g)?;
    validate_pair(r, b)?;
    let data = r
        .data()
        .iter()
        .zip(g.data())
        .zip(b.data())
        .map(|((&r, &g), &b)| LUMA_R * r + LUMA_G * g + LUMA_B * b)
        .collect();
    Ok(GrayImage::from_raw(r.width(), r.height(), data))
}

/// Checks that a reference/test pair is aligned.
///
/// Mismatched dimensions are always a hard error; the pipeline never
/// resamples silently.
pub fn validate_pair(x: &GrayImage, y: &GrayImage) -> Result<()> {
    if x.dimensions() != y.dimensions() {
        return Err(Error::DimensionMismatch {
            left_width: x.width(),
            left_height: x.height(),
            right_width: y.width(),
            right_height: y.height(),
        });
    }
    Ok(())
}
