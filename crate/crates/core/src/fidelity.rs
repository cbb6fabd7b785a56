//! Structural fidelity.
//!
//! A local kernel on window statistics, pooled spatially over each
//! subband, then fused across scales by a weighted geometric product.
//! This is the structure term of the SSIM family: constant offsets do
//! not move it, only second-order (co)variation does. A plain PSNR
//! lives here too as the harness sanity baseline.

use crate::config::{MetricConfig, SF_CLAMP_EPSILON};
use crate::error::{Error, Result};
use crate::gray::GrayImage;
use crate::pyramid::Pyramid;

/// Population-style window statistics (divide by the pixel count).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchStats {
    /// Standard deviation of the reference patch.
    pub sigma_x: f64,
    /// Standard deviation of the test patch.
    pub sigma_y: f64,
    /// Covariance between the patches.
    pub sigma_xy: f64,
}

impl PatchStats {
    /// Two-pass statistics over aligned patches of equal length.
    pub fn from_patches(x: &[f64], y: &[f64]) -> Self {
        assert_eq!(x.len(), y.len());
        assert!(!x.is_empty());
        let n = x.len() as f64;
        let mean_x = x.iter().sum::<f64>() / n;
        let mean_y = y.iter().sum::<f64>() / n;
        let mut var_x = 0.0;
        let mut var_y = 0.0;
        let mut cov = 0.0;
        for (&a, &b) in x.iter().zip(y) {
            let dx = a - mean_x;
            let dy = b - mean_y;
            var_x += dx * dx;
            var_y += dy * dy;
            cov += dx * dy;
        }
        Self {
            sigma_x: (var_x / n).sqrt(),
            sigma_y: (var_y / n).sqrt(),
            sigma_xy: cov / n,
        }
    }
}

/// Local structural fidelity of one window pair:
/// `(sigma_xy + C) / (sigma_x * sigma_y + C)`.
///
/// Cauchy-Schwarz bounds the exact value to [-1, 1]; the result is
/// clamped so float rounding can never leak past the bound.
pub fn sf_local(stats: &PatchStats, stabilizer: f64) -> f64 {
    debug_assert!(stabilizer > 0.0);
    let value =
        (stats.sigma_xy + stabilizer) / (stats.sigma_x * stats.sigma_y + stabilizer);
    value.clamp(-1.0, 1.0)
}

/// Spatially pooled fidelity of one subband pair: the plain mean of
/// [`sf_local`] over every fully interior window position.
pub fn sf_subband(x: &GrayImage, y: &GrayImage, cfg: &MetricConfig) -> Result<f64> {
    if x.dimensions() != y.dimensions() {
        return Err(Error::DimensionMismatch {
            left_width: x.width(),
            left_height: x.height(),
            right_width: y.width(),
            right_height: y.height(),
        });
    }
    let (w, h) = x.dimensions();
    let win = cfg.window_size;
    if w < win || h < win {
        return Err(Error::PlaneSmallerThanWindow {
            width: w,
            height: h,
            window: win,
        });
    }

    let stride = cfg.window_stride;
    let inv_count = 1.0 / (win * win) as f64;
    let xd = x.data();
    let yd = y.data();

    let mut total = 0.0;
    let mut windows = 0u64;
    let mut top = 0;
    while top + win <= h {
        let mut left = 0;
        while left + win <= w {
            // First pass: window means.
            let mut sum_x = 0.0;
            let mut sum_y = 0.0;
            for row in top..top + win {
                let base = row * w + left;
                for i in 0..win {
                    sum_x += xd[base + i];
                    sum_y += yd[base + i];
                }
            }
            let mean_x = sum_x * inv_count;
            let mean_y = sum_y * inv_count;

            // Second pass: central moments.
            let mut var_x = 0.0;
            let mut var_y = 0.0;
            let mut cov = 0.0;
            for row in top..top + win {
                let base = row * w + left;
                for i in 0..win {
                    let dx = xd[base + i] - mean_x;
                    let dy = yd[base + i] - mean_y;
                    var_x += dx * dx;
                    var_y += dy * dy;
                    cov += dx * dy;
                }
            }
            let stats = PatchStats {
                sigma_x: (var_x * inv_count).sqrt(),
                sigma_y: (var_y * inv_count).sqrt(),
                sigma_xy: cov * inv_count,
            };
            total += sf_local(&stats, cfg.stabilizer);
            windows += 1;
            left += stride;
        }
        top += stride;
    }
    Ok(total / windows as f64)
}

/// Cross-scale structural fidelity with the clamp applied before
/// exponentiation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SfScore {
    /// The fused value, in (0, 1].
    pub value: f64,
    /// True when any per-scale value was clamped up to the epsilon floor.
    pub clamped: bool,
}

/// Fuses per-scale subband fidelities into one score:
/// `prod_k max(SF_k, eps)^alpha_k`.
///
/// Negative per-scale values would make the fractional powers undefined,
/// so they clamp to [`SF_CLAMP_EPSILON`]; the flag records that the
/// clamp fired.
pub fn sf_overall(pyr_x: &Pyramid, pyr_y: &Pyramid, cfg: &MetricConfig) -> Result<SfScore> {
    if pyr_x.mode() != pyr_y.mode() {
        return Err(Error::PyramidModeMismatch {
            expected: pyr_x.mode(),
            got: pyr_y.mode(),
        });
    }
    if pyr_x.num_levels() != cfg.alpha.len() {
        return Err(Error::LevelCountMismatch {
            levels: pyr_x.num_levels(),
            weights: cfg.alpha.len(),
        });
    }
    if pyr_y.num_levels() != pyr_x.num_levels() {
        return Err(Error::LevelCountMismatch {
            levels: pyr_y.num_levels(),
            weights: cfg.alpha.len(),
        });
    }
    let mut value = 1.0;
    let mut clamped = false;
    for (k, alpha) in cfg.alpha.iter().enumerate() {
        let sf_k = sf_subband(pyr_x.level(k), pyr_y.level(k), cfg)?;
        let floored = if sf_k < SF_CLAMP_EPSILON {
            clamped = true;
            SF_CLAMP_EPSILON
        } else {
            sf_k
        };
        value *= floored.powf(*alpha);
    }
    Ok(SfScore { value, clamped })
}

/// Peak signal-to-noise ratio in dB against a fixed 255 peak.
///
/// Identical images have zero MSE; the conventional +inf sentinel is
/// returned rather than an error.
pub fn psnr(x: &GrayImage, y: &GrayImage) -> Result<f64> {
    crate::gray::validate_pair(x, y)?;
    let n = x.data().len() as f64;
    let mse = x
        .data()
        .iter()
        .zip(y.data())
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum::<f64>()
        / n;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (255.0 * 255.0 / mse).log10())
}
