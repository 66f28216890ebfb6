//! Command-line and config-file handling for the sweep.
//!
//! Precedence: built-in defaults, then the `--config` file, then flags.
//! The file is flat `key = value` text using the flag names without the
//! leading dashes; `#` starts a comment.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::Parser;
use thiserror::Error;

use super::{OutputFormat, SweepConfig};
use crate::order::OrderPriorKind;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error(transparent)]
    Cli(#[from] clap::Error),

    #[error("cannot read config file {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    File {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Invalid(#[from] crate::Error),
}

#[derive(Debug, Default, Parser)]
#[command(
    name = "symdyn",
    version,
    about = "Sweep binary decision points over a noisy logistic-map trajectory, \
             select Markov orders and estimate entropy rates"
)]
struct Cli {
    /// Flat key=value file with the same keys as the flags.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Logistic map parameter r in (0, 4] [default: 4.0]
    #[arg(long)]
    r: Option<f64>,
    /// Standard deviation of the additive Gaussian noise [default: 0.001]
    #[arg(long)]
    sigma: Option<f64>,
    /// Recorded trajectory length [default: 10000]
    #[arg(long)]
    n: Option<usize>,
    /// Discarded transient iterations [default: 1000]
    #[arg(long)]
    transient: Option<usize>,
    /// Random seed [default: 1]
    #[arg(long)]
    seed: Option<u64>,
    /// Number of evenly spaced decision points in [0, 1] [default: 200]
    #[arg(long)]
    grid: Option<usize>,
    /// Smallest Markov order considered [default: 1]
    #[arg(long = "k-min")]
    k_min: Option<usize>,
    /// Largest Markov order considered [default: 8]
    #[arg(long = "k-max")]
    k_max: Option<usize>,
    /// Prior over orders: uniform or size-penalty [default: size-penalty]
    #[arg(long = "order-prior", value_parser = parse_from_str::<OrderPriorKind>)]
    order_prior: Option<OrderPriorKind>,
    /// Symmetric Dirichlet hyperparameter [default: 1.0]
    #[arg(long)]
    alpha: Option<f64>,
    /// Output format: csv or json [default: csv]
    #[arg(long, value_parser = parse_from_str::<OutputFormat>)]
    format: Option<OutputFormat>,
    /// Summary output path [default: stdout]
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also write per-(d, k) estimates to this CSV
    #[arg(long, value_name = "PATH")]
    detail: Option<PathBuf>,
    /// Generate a fresh trajectory for each decision point
    #[arg(long = "per-point-trajectory")]
    per_point_trajectory: bool,
}

fn parse_from_str<T>(s: &str) -> Result<T, String>
where
    T: std::str::FromStr<Err = crate::Error>,
{
    s.parse().map_err(|e: crate::Error| e.to_string())
}

fn apply_key(config: &mut SweepConfig, key: &str, value: &str) -> Result<(), String> {
    fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
        value
            .parse()
            .map_err(|_| format!("cannot parse {value:?} as a value for {key}"))
    }
    match key.replace('_', "-").as_str() {
        "r" => config.r = num(key, value)?,
        "sigma" => config.sigma = num(key, value)?,
        "n" => config.n = num(key, value)?,
        "transient" => config.transient = num(key, value)?,
        "seed" => config.seed = num(key, value)?,
        "grid" => config.grid = num(key, value)?,
        "k-min" => config.k_min = num(key, value)?,
        "k-max" => config.k_max = num(key, value)?,
        "order-prior" => config.order_prior = parse_from_str(value)?,
        "alpha" => config.alpha = num(key, value)?,
        "format" => config.format = parse_from_str(value)?,
        "out" => config.out = Some(PathBuf::from(value)),
        "detail" => config.detail = Some(PathBuf::from(value)),
        "per-point-trajectory" => config.per_point_trajectory = num(key, value)?,
        _ => return Err(format!("unknown key {key:?}")),
    }
    Ok(())
}

fn apply_file(config: &mut SweepConfig, path: &Path) -> Result<(), ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| ConfigError::File {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
        apply_key(config, key.trim(), value.trim()).map_err(err)?;
    }
    Ok(())
}

/// Builds a validated [`SweepConfig`] from command-line arguments (the first
/// item is the program name).
pub fn parse_config<I, T>(args: I) -> Result<SweepConfig, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    let mut config = SweepConfig::default();
    if let Some(path) = &cli.config {
        apply_file(&mut config, path)?;
    }
    macro_rules! set {
        ($($field:ident),*) => {
            $(if let Some(v) = cli.$field { config.$field = v; })*
        };
    }
    set!(
        r,
        sigma,
        n,
        transient,
        seed,
        grid,
        k_min,
        k_max,
        order_prior,
        alpha,
        format
    );
    if cli.out.is_some() {
        config.out = cli.out;
    }
    if cli.detail.is_some() {
        config.detail = cli.detail;
    }
    if cli.per_point_trajectory {
        config.per_point_trajectory = true;
    }
    config.validate()?;
    Ok(config)
}
