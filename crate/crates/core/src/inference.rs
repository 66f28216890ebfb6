//! Conjugate Bayesian inference for k-th order Markov chains.
//!
//! Each context row of transition probabilities carries an independent
//! Dirichlet prior, so likelihood, evidence and posterior all factor over
//! contexts. Everything is conditional on the first `k` symbols of the data.
//! Contexts that never occur contribute a factor of one to the evidence and
//! keep their prior mean.

use std::collections::BTreeMap;

use crate::counts::{alphabet_power, CountTable, Word};
use crate::error::{Error, Result};
use crate::special::ln_gamma;

/// Product of Dirichlet priors, one per context. Rows not set explicitly
/// share `default_row`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletPrior {
    order: usize,
    alphabet_size: usize,
    default_row: Vec<f64>,
    rows: BTreeMap<u64, Vec<f64>>,
}

fn check_alpha_row(row: &[f64], alphabet_size: usize) -> Result<()> {
    if row.len() != alphabet_size {
        return Err(Error::Mismatch(format!(
            "prior row has {} entries for an alphabet of {alphabet_size}",
            row.len()
        )));
    }
    if let Some(&bad) = row.iter().find(|&&a| !(a > 0.0 && a.is_finite())) {
        return Err(Error::Domain {
            what: "Dirichlet hyperparameter",
            value: bad,
            expected: "finite alpha > 0",
        });
    }
    Ok(())
}

impl DirichletPrior {
    /// Every hyperparameter equal to `alpha`.
    pub fn symmetric(order: usize, alphabet_size: usize, alpha: f64) -> Result<Self> {
        if alphabet_size < 2 {
            return Err(Error::InvalidArgument(format!(
                "alphabet size must be at least 2, got {alphabet_size}"
            )));
        }
        alphabet_power(alphabet_size, order + 1)?;
        let default_row = vec![alpha; alphabet_size];
        check_alpha_row(&default_row, alphabet_size)?;
        Ok(Self {
            order,
            alphabet_size,
            default_row,
            rows: BTreeMap::new(),
        })
    }

    /// Replaces the hyperparameters of one context.
    pub fn with_row(mut self, context: &[u8], row: Vec<f64>) -> Result<Self> {
        if context.len() != self.order {
            return Err(Error::Mismatch(format!(
                "context of length {} in an order-{} prior",
                context.len(),
                self.order
            )));
        }
        check_alpha_row(&row, self.alphabet_size)?;
        let code = Word::from_symbols(context, self.alphabet_size)?.code();
        self.rows.insert(code, row);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn alpha(&self, context: &[u8], symbol: u8) -> f64 {
        self.row(context)[symbol as usize]
    }

    /// α(context) = Σ_s α(s·context).
    pub fn context_alpha(&self, context: &[u8]) -> f64 {
        self.row(context).iter().sum()
    }

    /// Total number of hyperparameters, `A^{k+1}`.
    pub fn num_parameters(&self) -> u64 {
        (self.alphabet_size as u64).pow(self.order as u32 + 1)
    }

    fn row(&self, context: &[u8]) -> &[f64] {
        assert_eq!(
            context.len(),
            self.order,
            "context length must equal the prior order"
        );
        let code = Word::from_symbols(context, self.alphabet_size)
            .expect("context symbols must lie in the alphabet")
            .code();
        self.row_by_code(code)
    }

    pub(crate) fn row_by_code(&self, code: u64) -> &[f64] {
        self.rows.get(&code).unwrap_or(&self.default_row)
    }

    pub(crate) fn default_row(&self) -> &[f64] {
        &self.default_row
    }

    /// Explicitly set rows, in context-code order.
    pub(crate) fn explicit_rows(&self) -> impl Iterator<Item = (u64, &[f64])> + '_ {
        self.rows.iter().map(|(&c, r)| (c, r.as_slice()))
    }

    pub(crate) fn check_matches(&self, counts: &CountTable) -> Result<()> {
        if counts.order() != self.order || counts.alphabet_size() != self.alphabet_size {
            return Err(Error::Mismatch(format!(
                "counts are order {} over {} symbols, prior is order {} over {}",
                counts.order(),
                counts.alphabet_size(),
                self.order,
                self.alphabet_size
            )));
        }
        Ok(())
    }
}

/// The default prior: every α(s·context) = 1, a uniform density over each
/// row's simplex.
pub fn uniform_prior(order: usize, alphabet_size: usize) -> Result<DirichletPrior> {
    DirichletPrior::symmetric(order, alphabet_size, 1.0)
}

/// Transition probabilities p(s | context).
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovChainParams {
    order: usize,
    alphabet_size: usize,
    default_row: Option<Vec<f64>>,
    rows: BTreeMap<u64, Vec<f64>>,
}

const ROW_SUM_TOLERANCE: f64 = 1e-12;

fn check_prob_row(row: &[f64], alphabet_size: usize) -> Result<()> {
    if row.len() != alphabet_size {
        return Err(Error::Mismatch(format!(
            "probability row has {} entries for an alphabet of {alphabet_size}",
            row.len()
        )));
    }
    if let Some(&bad) = row.iter().find(|&&p| !(0.0..=1.0).contains(&p)) {
        return Err(Error::Domain {
            what: "transition probability",
            value: bad,
            expected: "0 <= p <= 1",
        });
    }
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
        return Err(Error::Domain {
            what: "transition row sum",
            value: sum,
            expected: "1 within 1e-12",
        });
    }
    Ok(())
}

impl MarkovChainParams {
    /// Explicit rows plus an optional row used for every other context.
    pub fn new(
        order: usize,
        alphabet_size: usize,
        rows: impl IntoIterator<Item = (Vec<u8>, Vec<f64>)>,
        default_row: Option<Vec<f64>>,
    ) -> Result<Self> {
        alphabet_power(alphabet_size, order + 1)?;
        if let Some(d) = &default_row {
            check_prob_row(d, alphabet_size)?;
        }
        let mut table = BTreeMap::new();
        for (ctx, row) in rows {
            if ctx.len() != order {
                return Err(Error::Mismatch(format!(
                    "context of length {} in an order-{order} chain",
                    ctx.len()
                )));
            }
            check_prob_row(&row, alphabet_size)?;
            table.insert(Word::from_symbols(&ctx, alphabet_size)?.code(), row);
        }
        Ok(Self {
            order,
            alphabet_size,
            default_row,
            rows: table,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    /// p(symbol | context), or `None` if the context has no row.
    pub fn prob(&self, context: &[u8], symbol: u8) -> Option<f64> {
        if context.len() != self.order {
            return None;
        }
        let code = Word::from_symbols(context, self.alphabet_size).ok()?.code();
        self.prob_by_code(code, symbol)
    }

    fn prob_by_code(&self, code: u64, symbol: u8) -> Option<f64> {
        self.rows
            .get(&code)
            .or(self.default_row.as_ref())
            .and_then(|r| r.get(symbol as usize))
            .copied()
    }

    /// Every context row, explicit or default, in context-code order.
    /// Intended for small `A^k`.
    pub fn all_rows(&self) -> impl Iterator<Item = (Word, Vec<f64>)> + '_ {
        let n = (self.alphabet_size as u64).pow(self.order as u32);
        (0..n).filter_map(move |code| {
            self.rows
                .get(&code)
                .or(self.default_row.as_ref())
                .map(|r| (Word::from_code(code, self.order), r.clone()))
        })
    }
}

/// Natural-log evidence ln P(D | M_k).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogEvidence {
    pub order: usize,
    pub value: f64,
}

/// Σ n(s·context) ln p(s | context).
pub fn log_likelihood(params: &MarkovChainParams, counts: &CountTable) -> Result<f64> {
    if params.order != counts.order() || params.alphabet_size != counts.alphabet_size() {
        return Err(Error::Mismatch(format!(
            "counts are order {} over {} symbols, parameters are order {} over {}",
            counts.order(),
            counts.alphabet_size(),
            params.order,
            params.alphabet_size
        )));
    }
    let mut total = 0.0;
    for (ctx, row) in counts.rows() {
        for (s, &n) in row.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let p = params.prob_by_code(ctx.code(), s as u8).unwrap_or(0.0);
            if p <= 0.0 {
                return Err(Error::ZeroProbabilityObserved {
                    context: ctx.render(counts.alphabet_size()),
                    symbol: s as u8,
                });
            }
            total += n as f64 * p.ln();
        }
    }
    Ok(total)
}

/// Closed-form evidence: per visited context,
/// `ln Γ(α_h) − ln Γ(n_h + α_h) + Σ_s [ln Γ(n_s + α_s) − ln Γ(α_s)]`.
pub fn log_evidence(counts: &CountTable, prior: &DirichletPrior) -> Result<LogEvidence> {
    prior.check_matches(counts)?;
    let mut value = 0.0;
    for (ctx, row) in counts.rows() {
        let alpha = prior.row_by_code(ctx.code());
        let alpha_h: f64 = alpha.iter().sum();
        let n_h: u64 = row.iter().sum();
        let mut term = ln_gamma(alpha_h) - ln_gamma(n_h as f64 + alpha_h);
        for (&n, &a) in row.iter().zip(alpha) {
            if n > 0 {
                term += ln_gamma(n as f64 + a) - ln_gamma(a);
            }
        }
        value += term;
    }
    Ok(LogEvidence {
        order: counts.order(),
        value,
    })
}

/// Posterior mean p(s | h) = (n + α)(s·h) / (n + α)(h). Unvisited contexts
/// get their prior mean.
pub fn posterior_mean(counts: &CountTable, prior: &DirichletPrior) -> Result<MarkovChainParams> {
    prior.check_matches(counts)?;
    let normalize = |row: Vec<f64>| {
        let total: f64 = row.iter().sum();
        row.into_iter().map(|x| x / total).collect::<Vec<_>>()
    };
    let mut rows = BTreeMap::new();
    for (code, alpha) in prior.explicit_rows() {
        rows.insert(code, normalize(alpha.to_vec()));
    }
    for (ctx, n) in counts.rows() {
        let alpha = prior.row_by_code(ctx.code());
        let row = n.iter().zip(alpha).map(|(&n, &a)| n as f64 + a).collect();
        rows.insert(ctx.code(), normalize(row));
    }
    Ok(MarkovChainParams {
        order: counts.order(),
        alphabet_size: counts.alphabet_size(),
        default_row: Some(normalize(prior.default_row().to_vec())),
        rows,
    })
}
