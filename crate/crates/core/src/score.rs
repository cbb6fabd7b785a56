//! End-to-end scoring: decompose, measure, fuse.
//!
//! The fused prediction is a plain linear combination
//! `q = w_F * SF + w_N * SN`; the two component measures plot a test
//! image as a point in the (SF, SN) plane, and the fusion weights define
//! straight level sets across it.

use crate::config::MetricConfig;
use crate::error::{Error, Result};
use crate::fidelity::sf_overall;
use crate::gray::{validate_pair, GrayImage};
use crate::naturalness::sn_overall;
use crate::pyramid::decompose;
use serde::Serialize;

/// Which components a scoring call computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreMode {
    /// Reference-based structural fidelity alone; q = sf.
    SfOnly,
    /// No-reference statistical naturalness alone; q = sn.
    SnOnly,
    /// The fused prediction; q = w_F * sf + w_N * sn.
    Both,
}

/// One scored reference/test pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreRecord {
    /// Structural fidelity in (0, 1]. Absent only for no-reference
    /// (SN-only) scoring.
    pub sf: Option<f64>,
    /// Statistical naturalness: entropy in bits, or [0, 1] when the
    /// config normalizes it.
    pub sn: f64,
    /// The scalar prediction for the requested mode.
    pub q: f64,
    /// True when any per-scale SF was clamped before exponentiation.
    pub clamped: bool,
    /// Digest of the config that produced this record.
    pub config_digest: String,
}

/// Scores a test image against its reference with the fused measure.
pub fn score_pair(x: &GrayImage, y: &GrayImage, cfg: &MetricConfig) -> Result<ScoreRecord> {
    score_components(Some(x), y, cfg, ScoreMode::Both)
}

/// Scores with a selectable component set. The reference may be omitted
/// only in [`ScoreMode::SnOnly`].
pub fn score_components(
    x: Option<&GrayImage>,
    y: &GrayImage,
    cfg: &MetricConfig,
    mode: ScoreMode,
) -> Result<ScoreRecord> {
    cfg.validate()?;
    let pyr_y = decompose(y, cfg)?;
    let digest = cfg.digest();

    if mode == ScoreMode::SnOnly {
        let sn = sn_overall(&pyr_y, cfg)?;
        return Ok(ScoreRecord {
            sf: None,
            sn,
            q: sn,
            clamped: false,
            config_digest: digest,
        });
    }

    let x = x.ok_or(Error::MissingReference)?;
    validate_pair(x, y)?;
    let pyr_x = decompose(x, cfg)?;
    let sf = sf_overall(&pyr_x, &pyr_y, cfg)?;
    let sn = sn_overall(&pyr_y, cfg)?;
    let q = match mode {
        ScoreMode::SfOnly => sf.value,
        ScoreMode::Both => cfg.w_fidelity * sf.value + cfg.w_naturalness * sn,
        ScoreMode::SnOnly => unreachable!(),
    };
    Ok(ScoreRecord {
        sf: Some(sf.value),
        sn,
        q,
        clamped: sf.clamped,
        config_digest: digest,
    })
}
