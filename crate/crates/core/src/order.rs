//! Bayesian comparison of Markov orders.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::counts::{alphabet_power, transition_counts};
use crate::error::{Error, Result};
use crate::inference::{log_evidence, DirichletPrior};
use crate::special::log_sum_exp;
use crate::symbolize::SymbolSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderRange {
    k_min: usize,
    k_max: usize,
}

impl OrderRange {
    pub fn new(k_min: usize, k_max: usize, alphabet_size: usize) -> Result<Self> {
        if k_min > k_max {
            return Err(Error::InvalidArgument(format!(
                "k_min = {k_min} exceeds k_max = {k_max}"
            )));
        }
        alphabet_power(alphabet_size, k_max + 1)?;
        Ok(Self { k_min, k_max })
    }

    pub fn k_min(&self) -> usize {
        self.k_min
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn orders(&self) -> std::ops::RangeInclusive<usize> {
        self.k_min..=self.k_max
    }

    pub fn len(&self) -> usize {
        self.k_max - self.k_min + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderPriorKind {
    Uniform,
    /// P(M_k) ∝ exp(−|M_k|).
    #[default]
    SizePenalty,
}

impl FromStr for OrderPriorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "size-penalty" => Ok(Self::SizePenalty),
            other => Err(Error::InvalidArgument(format!(
                "unknown order prior {other:?} (expected uniform or size-penalty)"
            ))),
        }
    }
}

impl fmt::Display for OrderPriorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Uniform => "uniform",
            Self::SizePenalty => "size-penalty",
        })
    }
}

/// Number of free parameters `A^k (A − 1)`.
pub fn model_size(order: usize, alphabet_size: usize) -> Result<u64> {
    alphabet_power(alphabet_size, order)?
        .checked_mul(alphabet_size as u64 - 1)
        .ok_or_else(|| Error::Overflow(format!("model size for k = {order}, A = {alphabet_size}")))
}

/// Unnormalized natural-log prior over orders.
pub fn order_log_prior(order: usize, alphabet_size: usize, kind: OrderPriorKind) -> Result<f64> {
    match kind {
        OrderPriorKind::Uniform => Ok(0.0),
        OrderPriorKind::SizePenalty => Ok(-(model_size(order, alphabet_size)? as f64)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderEntry {
    pub order: usize,
    pub log_prior: f64,
    pub log_evidence: f64,
    pub posterior: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderPosterior {
    entries: Vec<OrderEntry>,
    selected: usize,
}

impl OrderPosterior {
    pub fn entries(&self) -> &[OrderEntry] {
        &self.entries
    }

    /// The posterior argmax k*.
    pub fn selected(&self) -> usize {
        self.selected
    }

    pub fn entry(&self, order: usize) -> Option<&OrderEntry> {
        self.entries.iter().find(|e| e.order == order)
    }

    /// True when k* sits at the top of the range, so the range may be
    /// cutting off a longer memory.
    pub fn hit_upper_bound(&self) -> bool {
        self.entries
            .last()
            .is_some_and(|e| e.order == self.selected)
            && self.entries.len() > 1
    }
}

/// Normalizes precomputed `(k, ln evidence)` pairs against the order prior.
/// Ties in the posterior go to the smaller order.
pub fn order_posterior_from_evidence(
    evidences: &[(usize, f64)],
    alphabet_size: usize,
    kind: OrderPriorKind,
) -> Result<OrderPosterior> {
    if evidences.is_empty() {
        return Err(Error::InvalidArgument("no orders to compare".into()));
    }
    let mut entries = evidences
        .iter()
        .map(|&(order, log_evidence)| {
            Ok(OrderEntry {
                order,
                log_prior: order_log_prior(order, alphabet_size, kind)?,
                log_evidence,
                posterior: 0.0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by_key(|e| e.order);

    let joint: Vec<f64> = entries
        .iter()
        .map(|e| e.log_prior + e.log_evidence)
        .collect();
    let norm = log_sum_exp(&joint);
    for (e, j) in entries.iter_mut().zip(&joint) {
        e.posterior = (j - norm).exp();
    }
    let mut best = 0;
    for (i, j) in joint.iter().enumerate() {
        if *j > joint[best] {
            best = i;
        }
    }
    let posterior = OrderPosterior {
        selected: entries[best].order,
        entries,
    };
    if posterior.hit_upper_bound() {
        log::info!(
            "selected order {} is the largest considered; the order range may be truncating the memory of the source",
            posterior.selected
        );
    }
    Ok(posterior)
}

/// Posterior over orders in `range` for `seq`. `priors[i]` is the Dirichlet
/// prior for order `range.k_min() + i`.
pub fn order_posterior(
    seq: &SymbolSequence,
    range: OrderRange,
    kind: OrderPriorKind,
    priors: &[DirichletPrior],
) -> Result<OrderPosterior> {
    if priors.len() != range.len() {
        return Err(Error::Mismatch(format!(
            "{} Dirichlet priors for {} orders",
            priors.len(),
            range.len()
        )));
    }
    if seq.len() <= range.k_max() {
        return Err(Error::SequenceTooShort {
            len: seq.len(),
            needed: range.k_max() + 1,
        });
    }
    let evidences = range
        .orders()
        .zip(priors)
        .map(|(k, prior)| {
            let counts = transition_counts(seq, k)?;
            Ok((k, log_evidence(&counts, prior)?.value))
        })
        .collect::<Result<Vec<_>>>()?;
    order_posterior_from_evidence(&evidences, seq.alphabet_size(), kind)
}

/// [`order_posterior`] with the same symmetric Dirichlet prior at every order.
pub fn order_posterior_symmetric(
    seq: &SymbolSequence,
    range: OrderRange,
    kind: OrderPriorKind,
    alpha: f64,
) -> Result<OrderPosterior> {
    let priors = range
        .orders()
        .map(|k| DirichletPrior::symmetric(k, seq.alphabet_size(), alpha))
        .collect::<Result<Vec<_>>>()?;
    order_posterior(seq, range, kind, &priors)
}
