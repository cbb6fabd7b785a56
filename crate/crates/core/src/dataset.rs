//! Dataset ingestion, batch scoring, and report persistence.
//!
//! A batch is described by a plain CSV manifest (one reference/test pair
//! plus its mean opinion score per row). Scoring never aborts on a bad
//! entry: failures are collected alongside the scored records, and the
//! correlation summaries are computed over whatever scored. Reports are
//! written atomically so an interrupted run never leaves partial files.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::MetricConfig;
use crate::error::{Error, Result};
use crate::filter::convolve_separable;
use crate::gray::{to_gray, GrayImage};
use crate::score::{score_pair, ScoreRecord};
use crate::stats::srcc;

/// Required manifest header, in order.
pub const MANIFEST_HEADER: [&str; 6] = [
    "test_path",
    "ref_path",
    "mos",
    "category",
    "scale_factor",
    "algorithm",
];

/// One manifest row: a test image, its reference, and its annotation.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub test_path: PathBuf,
    pub ref_path: PathBuf,
    pub mos: f64,
    pub category: Option<String>,
    pub scale_factor: Option<u32>,
    pub algorithm: Option<String>,
}

/// A correlation that either computed or carries the reason it could not.
/// Undefined values stay visible in reports instead of collapsing to 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Correlation {
    Value(f64),
    Undefined { error: String },
}

impl Correlation {
    fn from_result(r: Result<f64>) -> Self {
        match r {
            Ok(v) => Correlation::Value(v),
            Err(e) => Correlation::Undefined {
                error: e.to_string(),
            },
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Correlation::Value(v) => Some(*v),
            Correlation::Undefined { .. } => None,
        }
    }
}

/// Everything a batch run produces.
#[derive(Debug, Clone)]
pub struct BatchReport {
    /// Scored entries, in manifest order.
    pub records: Vec<(ManifestEntry, ScoreRecord)>,
    /// Entries that failed to load or score, with the reason.
    pub failures: Vec<(ManifestEntry, String)>,
    /// SRCC of the fused prediction against MOS.
    pub srcc_overall: Correlation,
    /// SRCC of the structural-fidelity component alone.
    pub srcc_sf_only: Correlation,
    /// SRCC of the statistical-naturalness component alone.
    pub srcc_sn_only: Correlation,
    /// Fused-prediction SRCC per category label.
    pub srcc_by_category: BTreeMap<String, Correlation>,
    pub config_digest: String,
    /// The config the batch ran under, embedded for the summary.
    pub config: MetricConfig,
}

/// Parses a manifest CSV. Relative image paths resolve against the
/// manifest's own directory.
pub fn load_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let base = path.parent().unwrap_or_else(|| Path::new(""));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::Io(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                format!("cannot open manifest {}: {e}", path.display()),
            )),
            _ => Error::Manifest {
                line: 0,
                message: e.to_string(),
            },
        })?;

    let headers = reader
        .headers()
        .map_err(|e| Error::Manifest {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let expected: Vec<&str> = MANIFEST_HEADER.to_vec();
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(Error::Manifest {
            line: 1,
            message: format!(
                "header must be exactly {:?}, got {:?}",
                expected.join(","),
                got.join(",")
            ),
        });
    }

    let resolve = |raw: &str| -> PathBuf {
        let p = Path::new(raw);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base.join(p)
        }
    };

    let mut entries = Vec::new();
    let mut seen: HashMap<PathBuf, u64> = HashMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Manifest {
            line: e
                .position()
                .map(|p| p.line())
                .unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let field = |i: usize| record.get(i).unwrap_or("");

        if record.len() != MANIFEST_HEADER.len() {
            return Err(Error::Manifest {
                line,
                message: format!("expected 6 fields, got {}", record.len()),
            });
        }
        if field(0).is_empty() || field(1).is_empty() {
            return Err(Error::Manifest {
                line,
                message: "test_path and ref_path must be nonempty".into(),
            });
        }
        let mos: f64 = field(2).parse().map_err(|_| Error::Manifest {
            line,
            message: format!("mos {:?} is not a number", field(2)),
        })?;
        if !mos.is_finite() {
            return Err(Error::Manifest {
                line,
                message: format!("mos {mos} is not finite"),
            });
        }
        let category = (!field(3).is_empty()).then(|| field(3).to_string());
        let scale_factor = if field(4).is_empty() {
            None
        } else {
            let sf: u32 = field(4).parse().map_err(|_| Error::Manifest {
                line,
                message: format!("scale_factor {:?} is not a positive integer", field(4)),
            })?;
            if sf == 0 {
                return Err(Error::Manifest {
                    line,
                    message: "scale_factor must be positive".into(),
                });
            }
            Some(sf)
        };
        let algorithm = (!field(5).is_empty()).then(|| field(5).to_string());

        let test_path = resolve(field(0));
        if let Some(first) = seen.insert(test_path.clone(), line) {
            return Err(Error::DuplicateTestPath {
                line,
                path: format!("{} (first at line {first})", test_path.display()),
            });
        }
        entries.push(ManifestEntry {
            test_path,
            ref_path: resolve(field(1)),
            mos,
            category,
            scale_factor,
            algorithm,
        });
    }
    Ok(entries)
}

/// Decodes a PNG or BMP file into a luma plane. 16-bit samples are
/// rescaled into the nominal [0, 255] range.
pub fn load_gray_image(path: &Path) -> Result<GrayImage> {
    let format = match path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .as_deref()
    {
        Some("png") => image::ImageFormat::Png,
        Some("bmp") => image::ImageFormat::Bmp,
        _ => {
            return Err(Error::UnsupportedFormat {
                path: path.display().to_string(),
            })
        }
    };
    let file = std::fs::File::open(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("cannot open {}: {e}", path.display()),
        ))
    })?;
    let decoded = image::load(std::io::BufReader::new(file), format).map_err(|source| {
        Error::ImageDecode {
            path: path.display().to_string(),
            source,
        }
    })?;

    let w = decoded.width() as usize;
    let h = decoded.height() as usize;
    match decoded {
        image::DynamicImage::ImageLuma8(img) => {
            GrayImage::new(w, h, img.into_raw().into_iter().map(f64::from).collect())
        }
        image::DynamicImage::ImageLuma16(img) => GrayImage::new(
            w,
            h,
            img.into_raw()
                .into_iter()
                .map(|v| f64::from(v) * 255.0 / 65535.0)
                .collect(),
        ),
        other => {
            // Any color layout funnels through an RGB view, then to luma.
            let (r, g, b) = match other {
                image::DynamicImage::ImageRgb16(_)
                | image::DynamicImage::ImageRgba16(_)
                | image::DynamicImage::ImageLumaA16(_) => {
                    let rgb = other.to_rgb16();
                    let mut planes = (
                        Vec::with_capacity(w * h),
                        Vec::with_capacity(w * h),
                        Vec::with_capacity(w * h),
                    );
                    for px in rgb.pixels() {
                        planes.0.push(f64::from(px.0[0]) * 255.0 / 65535.0);
                        planes.1.push(f64::from(px.0[1]) * 255.0 / 65535.0);
                        planes.2.push(f64::from(px.0[2]) * 255.0 / 65535.0);
                    }
                    planes
                }
                _ => {
                    let rgb = other.to_rgb8();
                    let mut planes = (
                        Vec::with_capacity(w * h),
                        Vec::with_capacity(w * h),
                        Vec::with_capacity(w * h),
                    );
                    for px in rgb.pixels() {
                        planes.0.push(f64::from(px.0[0]));
                        planes.1.push(f64::from(px.0[1]));
                        planes.2.push(f64::from(px.0[2]));
                    }
                    planes
                }
            };
            let r = GrayImage::new(w, h, r)?;
            let g = GrayImage::new(w, h, g)?;
            let b = GrayImage::new(w, h, b)?;
            to_gray(&r, &g, &b)
        }
    }
}

/// Scores every entry and assembles the correlation summaries.
///
/// Entries whose images fail to load or validate land in `failures`
/// without aborting the batch; the call fails only when the entry list
/// is empty or nothing scored at all.
pub fn evaluate_batch(entries: &[ManifestEntry], cfg: &MetricConfig) -> Result<BatchReport> {
    if entries.is_empty() {
        return Err(Error::EmptyBatch);
    }
    cfg.validate()?;

    let outcomes: Vec<std::result::Result<ScoreRecord, String>> = entries
        .par_iter()
        .map(|entry| {
            let run = || -> Result<ScoreRecord> {
                let reference = load_gray_image(&entry.ref_path)?;
                let test = load_gray_image(&entry.test_path)?;
                score_pair(&reference, &test, cfg)
            };
            run().map_err(|e| e.to_string())
        })
        .collect();

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (entry, outcome) in entries.iter().zip(outcomes) {
        match outcome {
            Ok(record) => records.push((entry.clone(), record)),
            Err(reason) => failures.push((entry.clone(), reason)),
        }
    }
    if records.is_empty() {
        return Err(Error::NoEntriesScored {
            failed: failures.len(),
        });
    }

    let mos: Vec<f64> = records.iter().map(|(e, _)| e.mos).collect();
    let q: Vec<f64> = records.iter().map(|(_, r)| r.q).collect();
    let sf: Vec<f64> = records
        .iter()
        .map(|(_, r)| r.sf.expect("batch records always score pairs"))
        .collect();
    let sn: Vec<f64> = records.iter().map(|(_, r)| r.sn).collect();

    let srcc_overall = Correlation::from_result(srcc(&q, &mos));
    let srcc_sf_only = Correlation::from_result(srcc(&sf, &mos));
    let srcc_sn_only = Correlation::from_result(srcc(&sn, &mos));

    let mut by_category: BTreeMap<String, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for (entry, record) in &records {
        if let Some(cat) = &entry.category {
            let slot = by_category.entry(cat.clone()).or_default();
            slot.0.push(record.q);
            slot.1.push(entry.mos);
        }
    }
    let srcc_by_category = by_category
        .into_iter()
        .map(|(cat, (q, mos))| (cat, Correlation::from_result(srcc(&q, &mos))))
        .collect();

    Ok(BatchReport {
        records,
        failures,
        srcc_overall,
        srcc_sf_only,
        srcc_sn_only,
        srcc_by_category,
        config_digest: cfg.digest(),
        config: cfg.clone(),
    })
}

impl BatchReport {
    /// The JSON value written to `summary.json` and printed by the CLI.
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "srcc_overall": self.srcc_overall,
            "srcc_sf_only": self.srcc_sf_only,
            "srcc_sn_only": self.srcc_sn_only,
            "srcc_by_category": self.srcc_by_category,
            "config_digest": self.config_digest,
            "config": self.config,
            "counts": {
                "scored": self.records.len(),
                "failed": self.failures.len(),
                "total": self.records.len() + self.failures.len(),
            },
            "failures": self.failures.iter().map(|(entry, reason)| {
                serde_json::json!({
                    "test_path": entry.test_path.display().to_string(),
                    "error": reason,
                })
            }).collect::<Vec<_>>(),
        })
    }
}

fn write_atomic(dir: &Path, name: &str, contents: &[u8]) -> Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(dir.join(name))
        .map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn fmt_opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|v| v.to_string()).unwrap_or_default()
}

/// Writes `scores.csv`, `summary.json`, and `scatter.csv` under `out_dir`.
/// Each file lands atomically via a temp file and rename.
pub fn write_report(report: &BatchReport, out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;

    let mut scores = csv::WriterBuilder::new().from_writer(Vec::new());
    scores
        .write_record([
            "test_path",
            "ref_path",
            "category",
            "scale_factor",
            "algorithm",
            "sf",
            "sn",
            "q",
            "mos",
            "clamped",
        ])
        .and_then(|()| {
            for (entry, record) in &report.records {
                scores.write_record([
                    entry.test_path.display().to_string(),
                    entry.ref_path.display().to_string(),
                    fmt_opt(&entry.category),
                    fmt_opt(&entry.scale_factor),
                    fmt_opt(&entry.algorithm),
                    record.sf.map(|v| v.to_string()).unwrap_or_default(),
                    record.sn.to_string(),
                    record.q.to_string(),
                    entry.mos.to_string(),
                    record.clamped.to_string(),
                ])?;
            }
            Ok(())
        })
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    let scores_bytes = scores
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    write_atomic(out_dir, "scores.csv", &scores_bytes)?;

    let summary = serde_json::to_vec_pretty(&report.summary_json())
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    write_atomic(out_dir, "summary.json", &summary)?;

    let mut scatter = String::from("sf,sn,w_f,w_n\n");
    for (_, record) in &report.records {
        use std::fmt::Write as _;
        writeln!(
            scatter,
            "{},{},{},{}",
            record.sf.map(|v| v.to_string()).unwrap_or_default(),
            record.sn,
            report.config.w_fidelity,
            report.config.w_naturalness,
        )
        .expect("writing to a String cannot fail");
    }
    write_atomic(out_dir, "scatter.csv", scatter.as_bytes())?;
    Ok(())
}

/// Separable Gaussian blur with kernel radius ceil(3 sigma), unit-sum
/// normalization, and symmetric boundary extension. Degradation
/// generator for sweeps and tests.
pub fn gaussian_blur(img: &GrayImage, sigma: f64) -> GrayImage {
    assert!(
        sigma > 0.0 && sigma.is_finite(),
        "gaussian_blur requires sigma > 0, got {sigma}"
    );
    let kernel = gaussian_kernel(sigma);
    convolve_separable(img, &kernel)
}

/// The sampled, normalized 1-D kernel behind [`gaussian_blur`].
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    assert!(sigma > 0.0 && sigma.is_finite());
    let radius = (3.0 * sigma).ceil() as usize;
    let mut kernel: Vec<f64> = (-(radius as isize)..=radius as isize)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = kernel.iter().sum();
    for k in &mut kernel {
        *k /= sum;
    }
    kernel
}
