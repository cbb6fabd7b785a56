//! Multi-scale decomposition.
//!
//! Two transforms sit behind [`TransformMode`]:
//!
//! * `Lowpass` — the classic filter-and-decimate pyramid. Level 1 is the
//!   input; each next level is the previous one smoothed with the 5-tap
//!   binomial kernel and decimated by two.
//! * `Laplacian` — band-pass differences of the low-pass chain, plus the
//!   final low-pass plane kept as `residual`. Upsample-and-add
//!   reconstruction recovers the input to float rounding, which the test
//!   suite uses as a round-trip oracle.
//!
//! Decimation keeps even-indexed samples, so an axis of length N shrinks
//! to ceil(N / 2). Boundaries extend symmetrically, mirroring without
//! repeating the edge sample.

use crate::config::{MetricConfig, TransformMode};
use crate::error::{Error, Result};
use crate::filter::convolve_separable;
use crate::gray::GrayImage;

/// 5-tap binomial low-pass, unit gain.
const REDUCE_KERNEL: [f64; 5] = [1.0 / 16.0, 4.0 / 16.0, 6.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0];

/// Same kernel with gain 2 per axis, compensating zero insertion.
const EXPAND_KERNEL: [f64; 5] = [2.0 / 16.0, 8.0 / 16.0, 12.0 / 16.0, 8.0 / 16.0, 2.0 / 16.0];

/// Ordered coefficient planes of one decomposition.
#[derive(Debug, Clone)]
pub struct Pyramid {
    levels: Vec<GrayImage>,
    residual: Option<GrayImage>,
    mode: TransformMode,
}

impl Pyramid {
    pub fn levels(&self) -> &[GrayImage] {
        &self.levels
    }

    pub fn level(&self, k: usize) -> &GrayImage {
        &self.levels[k]
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    /// Final low-pass plane; present only in Laplacian mode.
    pub fn residual(&self) -> Option<&GrayImage> {
        self.residual.as_ref()
    }

    pub fn mode(&self) -> TransformMode {
        self.mode
    }
}

/// Dimensions of level `k` (1-based) for an input of `width x height`.
pub fn level_dims(width: usize, height: usize, k: usize) -> (usize, usize) {
    let mut w = width;
    let mut h = height;
    for _ in 1..k {
        w = w.div_ceil(2);
        h = h.div_ceil(2);
    }
    (w, h)
}

/// One filter-and-decimate step.
fn reduce(img: &GrayImage) -> GrayImage {
    let filtered = convolve_separable(img, &REDUCE_KERNEL);
    let (w, h) = img.dimensions();
    let (ow, oh) = (w.div_ceil(2), h.div_ceil(2));
    let mut out = Vec::with_capacity(ow * oh);
    for y in 0..oh {
        let row = filtered.row(2 * y);
        for x in 0..ow {
            out.push(row[2 * x]);
        }
    }
    GrayImage::from_raw(ow, oh, out)
}

/// Zero-insertion upsample to `target` dimensions followed by the
/// gain-compensated binomial filter. `target` must ceil-halve back to the
/// source dimensions.
fn expand(img: &GrayImage, target: (usize, usize)) -> GrayImage {
    let (tw, th) = target;
    debug_assert_eq!(tw.div_ceil(2), img.width());
    debug_assert_eq!(th.div_ceil(2), img.height());
    let mut zeroed = vec![0.0; tw * th];
    for y in 0..img.height() {
        let row = img.row(y);
        let dst = &mut zeroed[2 * y * tw..];
        for x in 0..img.width() {
            dst[2 * x] = row[x];
        }
    }
    convolve_separable(&GrayImage::from_raw(tw, th, zeroed), &EXPAND_KERNEL)
}

fn plane_sub(a: &GrayImage, b: &GrayImage) -> GrayImage {
    debug_assert_eq!(a.dimensions(), b.dimensions());
    let data = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(&a, &b)| a - b)
        .collect();
    GrayImage::from_raw(a.width(), a.height(), data)
}

fn plane_add(a: &GrayImage, b: &GrayImage) -> GrayImage {
    debug_assert_eq!(a.dimensions(), b.dimensions());
    let data = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(&a, &b)| a + b)
        .collect();
    GrayImage::from_raw(a.width(), a.height(), data)
}

/// Decomposes `img` into `cfg.scales` levels under `cfg.transform_mode`.
///
/// Fails when the coarsest level would be smaller than the analysis
/// window in either axis.
pub fn decompose(img: &GrayImage, cfg: &MetricConfig) -> Result<Pyramid> {
    cfg.validate()?;
    let (w, h) = img.dimensions();
    let (lw, lh) = level_dims(w, h, cfg.scales);
    if lw < cfg.window_size || lh < cfg.window_size {
        return Err(Error::ImageTooSmall {
            width: w,
            height: h,
            scales: cfg.scales,
            window: cfg.window_size,
            level_width: lw,
            level_height: lh,
        });
    }

    // Low-pass chain g_1 .. g_K (plus g_{K+1} for the Laplacian residual).
    let extra = match cfg.transform_mode {
        TransformMode::Laplacian => 1,
        TransformMode::Lowpass => 0,
    };
    let mut lowpass = Vec::with_capacity(cfg.scales + extra);
    lowpass.push(img.clone());
    for _ in 1..cfg.scales + extra {
        lowpass.push(reduce(lowpass.last().expect("chain is nonempty")));
    }

    match cfg.transform_mode {
        TransformMode::Lowpass => Ok(Pyramid {
            levels: lowpass,
            residual: None,
            mode: TransformMode::Lowpass,
        }),
        TransformMode::Laplacian => {
            let mut levels = Vec::with_capacity(cfg.scales);
            for k in 0..cfg.scales {
                let up = expand(&lowpass[k + 1], lowpass[k].dimensions());
                levels.push(plane_sub(&lowpass[k], &up));
            }
            let residual = lowpass.pop().expect("chain holds K+1 planes");
            Ok(Pyramid {
                levels,
                residual: Some(residual),
                mode: TransformMode::Laplacian,
            })
        }
    }
}

/// Inverts a Laplacian pyramid by expanding from the residual and adding
/// band-pass levels coarse to fine.
pub fn reconstruct(pyr: &Pyramid) -> Result<GrayImage> {
    if pyr.mode != TransformMode::Laplacian {
        return Err(Error::PyramidModeMismatch {
            expected: TransformMode::Laplacian,
            got: pyr.mode,
        });
    }
    let mut current = pyr
        .residual
        .clone()
        .expect("Laplacian pyramids always carry a residual");
    for band in pyr.levels.iter().rev() {
        let up = expand(&current, band.dimensions());
        current = plane_add(band, &up);
    }
    Ok(current)
}
