//! Python bindings: the main types and operations of the quality model.
//!
//! Build the `sfsn_py` extension with
//! `cargo build --release -p sfsn-py`; `python/smoke_test.py` at the
//! repository root shows how to load and exercise it.

use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use sfsn_core as core;

fn to_py_err(e: core::Error) -> PyErr {
    match e {
        core::Error::Io(io) => PyIOError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// A single-channel image with values in the nominal [0, 255] range.
#[pyclass(module = "sfsn_py", skip_from_py_object)]
#[derive(Clone)]
struct Image {
    inner: core::GrayImage,
}

#[pymethods]
impl Image {
    /// Image(width, height, data) — row-major samples, length width*height.
    #[new]
    fn new(width: usize, height: usize, data: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: core::GrayImage::new(width, height, data).map_err(to_py_err)?,
        })
    }

    /// Decodes a PNG or BMP file; color input reduces to BT.601 luma.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(Self {
            inner: core::load_gray_image(&path).map_err(to_py_err)?,
        })
    }

    /// An image with every sample equal to `value`.
    #[staticmethod]
    fn constant(width: usize, height: usize, value: f64) -> PyResult<Self> {
        Ok(Self {
            inner: core::GrayImage::constant(width, height, value).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn width(&self) -> usize {
        self.inner.width()
    }

    #[getter]
    fn height(&self) -> usize {
        self.inner.height()
    }

    /// Row-major copy of the samples.
    fn data(&self) -> Vec<f64> {
        self.inner.data().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Image({}x{})", self.inner.width(), self.inner.height())
    }
}

/// Tunables of the metric. Omitted arguments keep their defaults.
#[pyclass(module = "sfsn_py", skip_from_py_object)]
#[derive(Clone)]
struct Config {
    inner: core::MetricConfig,
}

#[pymethods]
impl Config {
    #[new]
    #[pyo3(signature = (
        scales=None, mode=None, wf=None, wn=None, sn_normalized=None,
        window_size=None, window_stride=None, stabilizer=None,
        histogram_bins=None
    ))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        scales: Option<usize>,
        mode: Option<&str>,
        wf: Option<f64>,
        wn: Option<f64>,
        sn_normalized: Option<bool>,
        window_size: Option<usize>,
        window_stride: Option<usize>,
        stabilizer: Option<f64>,
        histogram_bins: Option<usize>,
    ) -> PyResult<Self> {
        let mut cfg = match scales {
            Some(k) => core::MetricConfig::with_scales(k).map_err(to_py_err)?,
            None => core::MetricConfig::default(),
        };
        if let Some(mode) = mode {
            cfg.transform_mode = mode.parse().map_err(to_py_err)?;
        }
        if let Some(wf) = wf {
            cfg.w_fidelity = wf;
        }
        if let Some(wn) = wn {
            cfg.w_naturalness = wn;
        }
        if let Some(norm) = sn_normalized {
            cfg.sn_normalized = norm;
        }
        if let Some(win) = window_size {
            cfg.window_size = win;
        }
        if let Some(stride) = window_stride {
            cfg.window_stride = stride;
        }
        if let Some(c) = stabilizer {
            cfg.stabilizer = c;
        }
        if let Some(bins) = histogram_bins {
            cfg.histogram_bins = bins;
        }
        cfg.validate().map_err(to_py_err)?;
        Ok(Self { inner: cfg })
    }

    #[getter]
    fn scales(&self) -> usize {
        self.inner.scales
    }

    #[getter]
    fn alpha(&self) -> Vec<f64> {
        self.inner.alpha.clone()
    }

    #[getter]
    fn mode(&self) -> String {
        self.inner.transform_mode.to_string()
    }

    #[getter]
    fn wf(&self) -> f64 {
        self.inner.w_fidelity
    }

    #[getter]
    fn wn(&self) -> f64 {
        self.inner.w_naturalness
    }

    #[getter]
    fn sn_normalized(&self) -> bool {
        self.inner.sn_normalized
    }

    #[getter]
    fn window_size(&self) -> usize {
        self.inner.window_size
    }

    /// Stable hash of every field.
    fn digest(&self) -> String {
        self.inner.digest()
    }

    fn __repr__(&self) -> String {
        format!(
            "Config(scales={}, mode={}, wf={}, wn={}, digest={})",
            self.inner.scales,
            self.inner.transform_mode,
            self.inner.w_fidelity,
            self.inner.w_naturalness,
            self.inner.digest()
        )
    }
}

/// One scored pair: the (sf, sn) point and the fused prediction q.
#[pyclass(module = "sfsn_py", skip_from_py_object)]
#[derive(Clone)]
struct Score {
    #[pyo3(get)]
    sf: Option<f64>,
    #[pyo3(get)]
    sn: f64,
    #[pyo3(get)]
    q: f64,
    #[pyo3(get)]
    clamped: bool,
    #[pyo3(get)]
    config_digest: String,
}

impl From<core::ScoreRecord> for Score {
    fn from(rec: core::ScoreRecord) -> Self {
        Self {
            sf: rec.sf,
            sn: rec.sn,
            q: rec.q,
            clamped: rec.clamped,
            config_digest: rec.config_digest,
        }
    }
}

#[pymethods]
impl Score {
    fn __repr__(&self) -> String {
        match self.sf {
            Some(sf) => format!("Score(sf={sf}, sn={}, q={})", self.sn, self.q),
            None => format!("Score(sf=None, sn={}, q={})", self.sn, self.q),
        }
    }
}

fn effective(config: Option<&Config>) -> core::MetricConfig {
    config.map(|c| c.inner.clone()).unwrap_or_default()
}

/// Fused quality of `test` against `reference`: q = wf*sf + wn*sn.
#[pyfunction]
#[pyo3(signature = (reference, test, config=None))]
fn score(reference: &Image, test: &Image, config: Option<&Config>) -> PyResult<Score> {
    core::score_pair(&reference.inner, &test.inner, &effective(config))
        .map(Score::from)
        .map_err(to_py_err)
}

/// Structural fidelity alone (q = sf).
#[pyfunction]
#[pyo3(signature = (reference, test, config=None))]
fn score_sf_only(reference: &Image, test: &Image, config: Option<&Config>) -> PyResult<Score> {
    core::score_components(
        Some(&reference.inner),
        &test.inner,
        &effective(config),
        core::ScoreMode::SfOnly,
    )
    .map(Score::from)
    .map_err(to_py_err)
}

/// Statistical naturalness alone (q = sn); no reference needed.
#[pyfunction]
#[pyo3(signature = (test, config=None))]
fn score_sn_only(test: &Image, config: Option<&Config>) -> PyResult<Score> {
    core::score_components(None, &test.inner, &effective(config), core::ScoreMode::SnOnly)
        .map(Score::from)
        .map_err(to_py_err)
}

/// Peak signal-to-noise ratio in dB (peak 255); inf for identical images.
#[pyfunction]
fn psnr(reference: &Image, test: &Image) -> PyResult<f64> {
    core::psnr(&reference.inner, &test.inner).map_err(to_py_err)
}

/// Spearman rank-order correlation (tie-aware).
#[pyfunction]
fn srcc(a: Vec<f64>, b: Vec<f64>) -> PyResult<f64> {
    core::srcc(&a, &b).map_err(to_py_err)
}

/// Pearson linear correlation.
#[pyfunction]
fn plcc(a: Vec<f64>, b: Vec<f64>) -> PyResult<f64> {
    core::plcc(&a, &b).map_err(to_py_err)
}

/// Separable Gaussian blur, the degradation generator used by sweeps.
#[pyfunction]
fn gaussian_blur(img: &Image, sigma: f64) -> PyResult<Image> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(PyValueError::new_err(format!(
            "sigma must be a positive finite number, got {sigma}"
        )));
    }
    Ok(Image {
        inner: core::gaussian_blur(&img.inner, sigma),
    })
}

#[pymodule]
fn sfsn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Image>()?;
    m.add_class::<Config>()?;
    m.add_class::<Score>()?;
    m.add_function(wrap_pyfunction!(score, m)?)?;
    m.add_function(wrap_pyfunction!(score_sf_only, m)?)?;
    m.add_function(wrap_pyfunction!(score_sn_only, m)?)?;
    m.add_function(wrap_pyfunction!(psnr, m)?)?;
    m.add_function(wrap_pyfunction!(srcc, m)?)?;
    m.add_function(wrap_pyfunction!(plcc, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_blur, m)?)?;
    Ok(())
}
