//! End-to-end decision-point sweep.
//!
//! One trajectory is generated and shared by every decision point unless
//! `per_point_trajectory` is set. Each grid point is an independent work
//! unit; rows come back ordered by `d` whatever order they finish in.

mod config;
mod output;

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{parse_config, ConfigError};
pub use output::{emit, emit_detail, parse_csv, parse_json, write_csv, write_detail_csv};

use crate::counts::{alphabet_power, transition_counts};
use crate::dynamics::{
    generate_trajectory, lyapunov_exponent, MapFamily, MapSpec, NoiseSpec, Trajectory,
};
use crate::entropy::{expected_info, EntropyEstimate};
use crate::error::{Error, Result};
use crate::inference::{log_evidence, DirichletPrior};
use crate::order::{order_posterior_from_evidence, OrderPriorKind, OrderRange};
use crate::symbolize::{decision_grid, symbolize, PartitionSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::InvalidArgument(format!(
                "unknown format {other:?} (expected csv or json)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub map: MapFamily,
    pub r: f64,
    pub sigma: f64,
    pub n: usize,
    pub transient: usize,
    pub seed: u64,
    pub grid: usize,
    pub k_min: usize,
    pub k_max: usize,
    pub order_prior: OrderPriorKind,
    /// Symmetric Dirichlet hyperparameter.
    pub alpha: f64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub detail: Option<PathBuf>,
    /// Draw a fresh trajectory for every decision point.
    pub per_point_trajectory: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            map: MapFamily::Logistic,
            r: 4.0,
            sigma: 1e-3,
            n: 10_000,
            transient: 1_000,
            seed: 1,
            grid: 200,
            k_min: 1,
            k_max: 8,
            order_prior: OrderPriorKind::SizePenalty,
            alpha: 1.0,
            format: OutputFormat::Csv,
            out: None,
            detail: None,
            per_point_trajectory: false,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.map_spec()?;
        NoiseSpec::new(self.sigma)?;
        OrderRange::new(self.k_min, self.k_max, 2)?;
        alphabet_power(2, self.k_max + 1)?;
        if self.n <= self.k_max + 1 {
            return Err(Error::InvalidArgument(format!(
                "n = {} must exceed k_max + 1 = {}",
                self.n,
                self.k_max + 1
            )));
        }
        if self.grid < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid = {} must be at least 2",
                self.grid
            )));
        }
        DirichletPrior::symmetric(0, 2, self.alpha)?;
        Ok(())
    }

    pub fn map_spec(&self) -> Result<MapSpec> {
        match self.map {
            MapFamily::Logistic => MapSpec::logistic(self.r),
        }
    }

    pub fn order_range(&self) -> Result<OrderRange> {
        OrderRange::new(self.k_min, self.k_max, 2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub d: f64,
    pub k_selected: Option<usize>,
    pub h_expected_bits: Option<f64>,
    pub h_rate_q_bits: Option<f64>,
    pub kl_correction_bits: Option<f64>,
    /// ln P(D | M_k) for k_min..=k_max.
    pub log_evidence: Vec<f64>,
    /// P(M_k | D) for k_min..=k_max.
    pub p_order: Vec<f64>,
    /// Entropy estimates for every order in the range.
    #[serde(skip)]
    pub per_order: Vec<EntropyEstimate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(d: f64, err: &Error) -> Self {
        Self {
            d,
            k_selected: None,
            h_expected_bits: None,
            h_rate_q_bits: None,
            kl_correction_bits: None,
            log_evidence: Vec::new(),
            p_order: Vec::new(),
            per_order: Vec::new(),
            error: Some(err.to_string()),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: SweepConfig,
    /// Lyapunov exponent of the shared trajectory in bits per step; `None`
    /// when some derivative along it was exactly zero.
    pub lyapunov_bits: Option<f64>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Index of the row with the largest expected entropy rate.
    pub fn argmax_expected_info(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if let Some(h) = row.h_expected_bits {
                if best.is_none_or(|(_, b)| h > b) {
                    best = Some((i, h));
                }
            }
        }
        best.map(|(i, _)| i)
    }

    /// Rows whose selected order is the top of the range.
    pub fn truncated_rows(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| {
                r.k_selected == Some(self.config.k_max) && self.config.k_min < self.config.k_max
            })
            .count()
    }
}

fn point_seed(seed: u64, index: usize) -> u64 {
    // splitmix64 finalizer
    let mut z = seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn analyze_point(
    traj: &Trajectory,
    part: &PartitionSpec,
    config: &SweepConfig,
    range: OrderRange,
) -> Result<SweepRow> {
    let seq = symbolize(traj, part);
    let mut evidences = Vec::with_capacity(range.len());
    let mut per_order = Vec::with_capacity(range.len());
    for k in range.orders() {
        let counts = transition_counts(&seq, k)?;
        let prior = DirichletPrior::symmetric(k, seq.alphabet_size(), config.alpha)?;
        evidences.push((k, log_evidence(&counts, &prior)?.value));
        per_order.push(expected_info(&counts, &prior)?);
    }
    let posterior =
        order_posterior_from_evidence(&evidences, seq.alphabet_size(), config.order_prior)?;
    let selected = per_order[posterior.selected() - range.k_min()];
    Ok(SweepRow {
        d: part.decision_point(),
        k_selected: Some(posterior.selected()),
        h_expected_bits: Some(selected.expected_info),
        h_rate_q_bits: Some(selected.h_rate_q),
        kl_correction_bits: Some(selected.kl_correction),
        log_evidence: evidences.into_iter().map(|(_, e)| e).collect(),
        p_order: posterior.entries().iter().map(|e| e.posterior).collect(),
        per_order,
        error: None,
    })
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let map = config.map_spec()?;
    let noise = NoiseSpec::new(config.sigma)?;
    let range = config.order_range()?;
    let grid = decision_grid(config.grid)?;

    let shared = generate_trajectory(&map, &noise, config.n, config.transient, config.seed)?;
    let lyapunov = lyapunov_exponent(&map, &shared)?;

    let rows = grid
        .par_iter()
        .enumerate()
        .map(|(i, part)| {
            let row = if config.per_point_trajectory {
                generate_trajectory(
                    &map,
                    &noise,
                    config.n,
                    config.transient,
                    point_seed(config.seed, i),
                )
                .and_then(|t| analyze_point(&t, part, config, range))
            } else {
                analyze_point(&shared, part, config, range)
            };
            row.unwrap_or_else(|e| {
                log::error!("decision point {}: {e}", part.decision_point());
                SweepRow::failed(part.decision_point(), &e)
            })
        })
        .collect();

    Ok(SweepResult {
        config: config.clone(),
        lyapunov_bits: (!lyapunov.is_degenerate()).then_some(lyapunov.bits_per_step),
        rows,
    })
}
