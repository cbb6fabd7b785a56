//! Metric configuration.
//!
//! Every tunable of the model lives here so that a scored record can be
//! traced back to the exact settings that produced it (see
//! [`MetricConfig::digest`]).

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Cross-scale weights from the multi-scale SSIM literature, used as the
/// default `alpha` for five scales.
pub const MS_SSIM_WEIGHTS: [f64; 5] = [0.0448, 0.2856, 0.3001, 0.2363, 0.1333];

/// Default stabilizer: the SSIM structure-term convention C3 = (k2 * L)^2 / 2
/// with k2 = 0.03 and an 8-bit dynamic range L = 255.
pub const DEFAULT_STABILIZER: f64 = (0.03 * 255.0) * (0.03 * 255.0) / 2.0;

/// Per-scale SF values below this are clamped before exponentiation so the
/// fractional powers in the cross-scale product stay defined.
pub const SF_CLAMP_EPSILON: f64 = 1e-6;

/// Which multi-scale decomposition feeds the measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformMode {
    /// Band-pass pyramid: difference-of-lowpass levels plus a coarse residual.
    Laplacian,
    /// Plain low-pass pyramid: the input followed by filtered-and-decimated copies.
    Lowpass,
}

impl std::fmt::Display for TransformMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TransformMode::Laplacian => write!(f, "laplacian"),
            TransformMode::Lowpass => write!(f, "lowpass"),
        }
    }
}

impl std::str::FromStr for TransformMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "laplacian" => Ok(TransformMode::Laplacian),
            "lowpass" => Ok(TransformMode::Lowpass),
            other => Err(Error::InvalidConfig(format!(
                "unknown transform mode {other:?} (expected laplacian or lowpass)"
            ))),
        }
    }
}

/// All tunables of the quality model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    /// Number of pyramid scales K.
    pub scales: usize,
    /// Per-scale fusion weights, length K, each positive, summing to ~1.
    pub alpha: Vec<f64>,
    /// Square window side for local statistics; odd, >= 3.
    pub window_size: usize,
    /// Step between window positions.
    pub window_stride: usize,
    /// Positive stabilizing constant in the local fidelity kernel.
    pub stabilizer: f64,
    /// Number of uniform histogram bins B.
    pub histogram_bins: usize,
    /// Coefficient range covered by the histogram; values outside clamp
    /// into the end bins.
    pub histogram_range: (f64, f64),
    /// Weight of structural fidelity in the fused score.
    pub w_fidelity: f64,
    /// Weight of statistical naturalness in the fused score.
    pub w_naturalness: f64,
    /// Decomposition feeding both measures.
    pub transform_mode: TransformMode,
    /// Report naturalness divided by log2(B) so it lies in [0, 1].
    pub sn_normalized: bool,
}

impl Default for MetricConfig {
    fn default() -> Self {
        Self {
            scales: 5,
            alpha: MS_SSIM_WEIGHTS.to_vec(),
            window_size: 11,
            window_stride: 1,
            stabilizer: DEFAULT_STABILIZER,
            histogram_bins: 511,
            histogram_range: (-255.0, 255.0),
            w_fidelity: 0.9,
            w_naturalness: 0.1,
            transform_mode: TransformMode::Laplacian,
            sn_normalized: false,
        }
    }
}

impl MetricConfig {
    /// Default configuration with `scales` levels (1..=5).
    ///
    /// The canonical five-scale weights are truncated to the first
    /// `scales` entries and renormalized to sum to 1. More than five
    /// scales requires explicit weights.
    pub fn with_scales(scales: usize) -> Result<Self> {
        if scales == 0 || scales > MS_SSIM_WEIGHTS.len() {
            return Err(Error::InvalidConfig(format!(
                "no default scale weights for K = {scales}; supply alpha explicitly"
            )));
        }
        let mut alpha: Vec<f64> = MS_SSIM_WEIGHTS[..scales].to_vec();
        let sum: f64 = alpha.iter().sum();
        for a in &mut alpha {
            *a /= sum;
        }
        Ok(Self {
            scales,
            alpha,
            ..Self::default()
        })
    }

    /// Checks every invariant the rest of the pipeline relies on.
    pub fn validate(&self) -> Result<()> {
        if self.scales == 0 {
            return Err(Error::InvalidConfig("scales must be >= 1".into()));
        }
        if self.alpha.len() != self.scales {
            return Err(Error::InvalidConfig(format!(
                "alpha has {} entries but scales = {}",
                self.alpha.len(),
                self.scales
            )));
        }
        if self.alpha.iter().any(|&a| !a.is_finite() || a <= 0.0) {
            return Err(Error::InvalidConfig(
                "every scale weight must be finite and positive".into(),
            ));
        }
        // The canonical five-scale weights sum to 1.0001, so allow slack.
        let sum: f64 = self.alpha.iter().sum();
        if (sum - 1.0).abs() > 1e-2 {
            return Err(Error::InvalidConfig(format!(
                "scale weights sum to {sum}, expected ~1"
            )));
        }
        if self.window_size < 3 || self.window_size.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "window_size must be odd and >= 3, got {}",
                self.window_size
            )));
        }
        if self.window_stride == 0 {
            return Err(Error::InvalidConfig("window_stride must be >= 1".into()));
        }
        if !self.stabilizer.is_finite() || self.stabilizer <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "stabilizer must be positive, got {}",
                self.stabilizer
            )));
        }
        if self.histogram_bins < 2 {
            return Err(Error::InvalidConfig(format!(
                "histogram_bins must be >= 2, got {}",
                self.histogram_bins
            )));
        }
        let (lo, hi) = self.histogram_range;
        if !lo.is_finite() || !hi.is_finite() || hi <= lo {
            return Err(Error::InvalidConfig(format!(
                "histogram_range must be a finite interval with hi > lo, got [{lo}, {hi}]"
            )));
        }
        if !self.w_fidelity.is_finite() || !self.w_naturalness.is_finite() {
            return Err(Error::InvalidConfig(
                "fusion weights must be finite".into(),
            ));
        }
        Ok(())
    }

    /// Stable hash of every field, used to detect config drift across a
    /// dataset run. Floats hash by their exact bit pattern.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        let mut canon = String::new();
        use std::fmt::Write as _;
        write!(canon, "scales={};alpha=", self.scales).unwrap();
        for a in &self.alpha {
            write!(canon, "{:016x},", a.to_bits()).unwrap();
        }
        write!(
            canon,
            ";window={};stride={};c={:016x};bins={};range={:016x},{:016x};wf={:016x};wn={:016x};mode={};norm={}",
            self.window_size,
            self.window_stride,
            self.stabilizer.to_bits(),
            self.histogram_bins,
            self.histogram_range.0.to_bits(),
            self.histogram_range.1.to_bits(),
            self.w_fidelity.to_bits(),
            self.w_naturalness.to_bits(),
            self.transform_mode,
            self.sn_normalized,
        )
        .unwrap();
        hasher.update(canon.as_bytes());
        let digest = hasher.finalize();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}
