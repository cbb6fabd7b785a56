//! Statistical naturalness.
//!
//! A no-reference measure: the Shannon entropy of the pooled coefficient
//! distribution of the test image's decomposition, estimated with a
//! uniform histogram. Texture-rich content spreads band-pass mass over
//! many bins and scores high; smoothed content concentrates near zero
//! and scores low.

use crate::config::{MetricConfig, TransformMode};
use crate::error::{Error, Result};
use crate::pyramid::Pyramid;

/// Uniform-bin histogram of transform coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientHistogram {
    lo: f64,
    width: f64,
    bin_edges: Vec<f64>,
    counts: Vec<u64>,
    total: u64,
}

impl CoefficientHistogram {
    /// An empty histogram with `bins` uniform bins over `range`.
    pub fn new(bins: usize, range: (f64, f64)) -> Result<Self> {
        let (lo, hi) = range;
        if bins < 2 {
            return Err(Error::InvalidConfig(format!(
                "histogram needs at least 2 bins, got {bins}"
            )));
        }
        if !lo.is_finite() || !hi.is_finite() || hi <= lo {
            return Err(Error::InvalidConfig(format!(
                "histogram range must be a finite interval, got [{lo}, {hi}]"
            )));
        }
        let width = (hi - lo) / bins as f64;
        let bin_edges = (0..=bins).map(|i| lo + i as f64 * width).collect();
        Ok(Self {
            lo,
            width,
            bin_edges,
            counts: vec![0; bins],
            total: 0,
        })
    }

    /// Builds a populated histogram directly from counts.
    pub fn from_counts(counts: Vec<u64>, range: (f64, f64)) -> Result<Self> {
        let mut hist = Self::new(counts.len(), range)?;
        hist.total = counts.iter().sum();
        hist.counts = counts;
        Ok(hist)
    }

    /// Adds one coefficient; out-of-range values clamp into the end bins.
    pub fn accumulate(&mut self, value: f64) {
        debug_assert!(value.is_finite());
        let bins = self.counts.len();
        let raw = ((value - self.lo) / self.width).floor();
        let index = if raw < 0.0 {
            0
        } else if raw >= bins as f64 {
            bins - 1
        } else {
            raw as usize
        };
        self.counts[index] += 1;
        self.total += 1;
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn bin_edges(&self) -> &[f64] {
        &self.bin_edges
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Occupancy probabilities, counts / total.
    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        let total = self.total as f64;
        self.counts.iter().map(move |&c| c as f64 / total)
    }
}

/// Pools the coefficients of a decomposition into one histogram.
///
/// In Laplacian mode only the band-pass levels contribute; the low-pass
/// residual measures global brightness, not texture, and is excluded.
/// In Lowpass mode every level contributes.
pub fn coefficient_histogram(pyr: &Pyramid, cfg: &MetricConfig) -> Result<CoefficientHistogram> {
    let mut hist = CoefficientHistogram::new(cfg.histogram_bins, cfg.histogram_range)?;
    debug_assert!(
        pyr.mode() != TransformMode::Laplacian || pyr.residual().is_some(),
        "Laplacian pyramids carry a residual"
    );
    for level in pyr.levels() {
        for &c in level.data() {
            hist.accumulate(c);
        }
    }
    Ok(hist)
}

/// Shannon entropy of the bin occupancy, in bits, with 0 log 0 = 0.
pub fn entropy(hist: &CoefficientHistogram) -> Result<f64> {
    if hist.total() == 0 {
        return Err(Error::EmptyHistogram);
    }
    let total = hist.total() as f64;
    let mut h = 0.0;
    for &count in hist.counts() {
        if count == 0 {
            continue;
        }
        let p = count as f64 / total;
        h -= p * p.log2();
    }
    Ok(h)
}

/// Statistical naturalness of a test-image decomposition: pooled
/// coefficient entropy, optionally normalized by log2(B) into [0, 1].
pub fn sn_overall(pyr_y: &Pyramid, cfg: &MetricConfig) -> Result<f64> {
    let h = entropy(&coefficient_histogram(pyr_y, cfg)?)?;
    if cfg.sn_normalized {
        Ok(h / (cfg.histogram_bins as f64).log2())
    } else {
        Ok(h)
    }
}
