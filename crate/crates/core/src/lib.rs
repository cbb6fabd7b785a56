//! Two-dimensional quality assessment for super-resolved images.
//!
//! The model places a test image in a plane spanned by two measures
//! computed in a multi-scale transform domain:
//!
//! * **Structural fidelity (SF)** — a reference-based score built from
//!   windowed covariance statistics per subband, pooled spatially and
//!   fused across scales ([`fidelity`]).
//! * **Statistical naturalness (SN)** — a no-reference score: the
//!   Shannon entropy of the pooled coefficient histogram
//!   ([`naturalness`]).
//!
//! A linear fusion `q = w_F * SF + w_N * SN` collapses the pair into a
//! scalar prediction ([`score`]). The [`dataset`] module batch-scores
//! manifests of annotated image pairs and summarizes agreement with
//! mean opinion scores via Spearman rank correlation ([`stats`]).

pub mod config;
pub mod dataset;
pub mod error;
pub mod fidelity;
mod filter;
pub mod gray;
pub mod naturalness;
pub mod pyramid;
pub mod score;
pub mod stats;

pub use config::{MetricConfig, TransformMode, MS_SSIM_WEIGHTS};
pub use error::{Error, Result};
pub use fidelity::{psnr, sf_local, sf_overall, sf_subband, PatchStats, SfScore};
pub use gray::{to_gray, validate_pair, GrayImage};
pub use naturalness::{coefficient_histogram, entropy, sn_overall, CoefficientHistogram};
pub use pyramid::{decompose, level_dims, reconstruct, Pyramid};
pub use score::{score_components, score_pair, ScoreMode, ScoreRecord};
pub use stats::{plcc, rank, srcc, RankVector};

pub use dataset::{
    evaluate_batch, gaussian_blur, load_gray_image, load_manifest, write_report, BatchReport,
    Correlation, ManifestEntry,
};
