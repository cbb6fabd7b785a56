//! `sfsn` — score super-resolved images against references, batch-evaluate
//! annotated datasets, and sweep synthetic blur degradations.
//!
//! Standard output carries only machine-readable payload (JSON or CSV);
//! diagnostics go to standard error. Exit codes: 0 success, 1 processing
//! error, 2 usage error.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use sfsn_core::{
    evaluate_batch, gaussian_blur, load_gray_image, load_manifest, score_components, score_pair,
    write_report, GrayImage, MetricConfig, ScoreMode, TransformMode,
};

#[derive(Parser)]
#[command(
    name = "sfsn",
    version,
    about = "Structural-fidelity / statistical-naturalness quality scoring for super-resolved images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score one reference/test pair; prints a JSON record
    Score(ScoreArgs),
    /// Score every entry of a manifest and write a report directory
    Batch(BatchArgs),
    /// Score Gaussian-blurred copies of a reference across sigmas; prints CSV
    Sweep(SweepArgs),
    /// Print the effective configuration as JSON
    ConfigDump(ConfigDumpArgs),
}

/// Flags shared by every subcommand that builds a configuration.
#[derive(Args, Debug)]
struct ConfigOverrides {
    /// Transform mode: laplacian or lowpass
    #[arg(long, value_name = "MODE")]
    mode: Option<TransformMode>,

    /// Number of pyramid scales (1-5)
    #[arg(long, value_name = "K")]
    scales: Option<usize>,

    /// Structural-fidelity fusion weight
    #[arg(long, value_name = "W")]
    wf: Option<f64>,

    /// Statistical-naturalness fusion weight
    #[arg(long, value_name = "W")]
    wn: Option<f64>,

    /// Normalize naturalness by log2(bins) so it lies in [0, 1]
    #[arg(long)]
    sn_normalized: bool,
}

impl ConfigOverrides {
    /// Defaults with the flag overrides applied. Rejections here are
    /// operator mistakes, so they exit as usage errors.
    fn build(&self) -> Result<MetricConfig> {
        let mut cfg = match self.scales {
            Some(k) => {
                MetricConfig::with_scales(k).map_err(|e| UsageError(e.to_string()))?
            }
            None => MetricConfig::default(),
        };
        if let Some(mode) = self.mode {
            cfg.transform_mode = mode;
        }
        if let Some(wf) = self.wf {
            cfg.w_fidelity = wf;
        }
        if let Some(wn) = self.wn {
            cfg.w_naturalness = wn;
        }
        if self.sn_normalized {
            cfg.sn_normalized = true;
        }
        cfg.validate().map_err(|e| UsageError(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct ScoreArgs {
    /// Reference image then test image; the reference may be omitted
    /// with --sn-only
    #[arg(value_name = "IMAGE", num_args = 1..=2, required = true)]
    images: Vec<PathBuf>,

    /// Report structural fidelity only (q = sf)
    #[arg(long, conflicts_with = "sn_only")]
    sf_only: bool,

    /// Report statistical naturalness only (q = sn; no reference needed)
    #[arg(long)]
    sn_only: bool,

    #[command(flatten)]
    config: ConfigOverrides,
}

#[derive(Args)]
struct BatchArgs {
    /// Manifest CSV: test_path,ref_path,mos,category,scale_factor,algorithm
    manifest: PathBuf,

    /// Directory receiving scores.csv, summary.json, and scatter.csv
    #[arg(long, value_name = "DIR")]
    out: PathBuf,

    /// Worker threads for scoring (default: all cores)
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,

    #[command(flatten)]
    config: ConfigOverrides,
}

#[derive(Args)]
struct SweepArgs {
    /// Reference image to degrade and score against itself
    reference: PathBuf,

    /// Comma-separated blur sigmas; 0 scores an unmodified copy
    #[arg(long, value_name = "S1,S2,...", value_delimiter = ',', required = true)]
    sigmas: Vec<f64>,

    #[command(flatten)]
    config: ConfigOverrides,
}

#[derive(Args)]
struct ConfigDumpArgs {
    #[command(flatten)]
    config: ConfigOverrides,
}

/// An operator mistake rather than a processing failure; exits 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage_error<T>(message: impl Into<String>) -> Result<T> {
    Err(UsageError(message.into()).into())
}

fn run_score(args: &ScoreArgs) -> Result<()> {
    let cfg = args.config.build()?;
    let mode = if args.sf_only {
        ScoreMode::SfOnly
    } else if args.sn_only {
        ScoreMode::SnOnly
    } else {
        ScoreMode::Both
    };

    let (ref_path, test_path) = match args.images.as_slice() {
        [reference, test] => (Some(reference), test),
        [test] if mode == ScoreMode::SnOnly => (None, test),
        [_] => {
            return usage_error(
                "score requires <REF> <TEST>; a single image is allowed only with --sn-only",
            )
        }
        _ => unreachable!("clap enforces 1..=2 positionals"),
    };

    // SN-only never reads the reference, even when one is supplied.
    let reference: Option<GrayImage> = match (mode, ref_path) {
        (ScoreMode::SnOnly, _) | (_, None) => None,
        (_, Some(path)) => Some(
            load_gray_image(path).with_context(|| format!("reference {}", path.display()))?,
        ),
    };
    let test =
        load_gray_image(test_path).with_context(|| format!("test {}", test_path.display()))?;

    let record = score_components(reference.as_ref(), &test, &cfg, mode)?;
    let payload = serde_json::json!({
        "sf": record.sf,
        "sn": record.sn,
        "q": record.q,
        "clamped": record.clamped,
    });
    println!("{payload}");
    Ok(())
}

fn run_batch(args: &BatchArgs) -> Result<()> {
    let cfg = args.config.build()?;
    let entries = load_manifest(&args.manifest)
        .with_context(|| format!("manifest {}", args.manifest.display()))?;
    if entries.is_empty() {
        return usage_error(format!(
            "manifest {} contains no entries",
            args.manifest.display()
        ));
    }

    let report = match args.jobs {
        Some(n) => {
            if n == 0 {
                return usage_error("--jobs must be at least 1");
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .context("building worker pool")?;
            pool.install(|| evaluate_batch(&entries, &cfg))?
        }
        None => evaluate_batch(&entries, &cfg)?,
    };

    write_report(&report, &args.out)
        .with_context(|| format!("writing report to {}", args.out.display()))?;
    for (entry, reason) in &report.failures {
        eprintln!("warning: {} failed: {reason}", entry.test_path.display());
    }
    println!("{}", serde_json::to_string_pretty(&report.summary_json())?);
    Ok(())
}

fn run_sweep(args: &SweepArgs) -> Result<()> {
    let cfg = args.config.build()?;
    if args.sigmas.is_empty() {
        return usage_error("--sigmas needs at least one value");
    }
    if let Some(bad) = args
        .sigmas
        .iter()
        .find(|s| !s.is_finite() || **s < 0.0)
    {
        return usage_error(format!("sigma {bad} is not a finite non-negative number"));
    }

    let reference = load_gray_image(&args.reference)
        .with_context(|| format!("reference {}", args.reference.display()))?;

    println!("sigma,sf,sn,q");
    for &sigma in &args.sigmas {
        let test = if sigma == 0.0 {
            reference.clone()
        } else {
            gaussian_blur(&reference, sigma)
        };
        let record = score_pair(&reference, &test, &cfg)?;
        println!(
            "{sigma},{},{},{}",
            record.sf.expect("pair scoring always yields sf"),
            record.sn,
            record.q
        );
    }
    Ok(())
}

fn run_config_dump(args: &ConfigDumpArgs) -> Result<()> {
    let cfg = args.config.build()?;
    let mut value = serde_json::to_value(&cfg)?;
    value["digest"] = serde_json::Value::String(cfg.digest());
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Score(args) => run_score(args),
        Command::Batch(args) => run_batch(args),
        Command::Sweep(args) => run_sweep(args),
        Command::ConfigDump(args) => run_config_dump(args),
    };
    match outcome {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = if e.downcast_ref::<UsageError>().is_some() {
                2
            } else {
                1
            };
            std::process::exit(code);
        }
    }
}
