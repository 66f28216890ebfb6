//! Posterior-expected entropy rate of an inferred Markov chain.
//!
//! With Q the posterior-mean distribution (context weights
//! q(h) = (n + α)(h) / β_k, transitions q(s|h) = (n + α)(s·h) / (n + α)(h))
//! and P drawn from the Dirichlet posterior, the posterior expectation of
//! D[Q‖P] + h[Q] has the closed form
//!
//! ```text
//! (1 / ln 2) [ Σ_h q(h) ψ(β q(h)) − Σ_{h,s} q(h) q(s|h) ψ(β q(h) q(s|h)) ]
//! ```
//!
//! and for large counts approaches `H_{k+1}[Q] − H_k[Q] + A^k (A − 1) / (2 β ln 2)`.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::LN_2;

use crate::counts::{CountTable, Word};
use crate::error::Result;
use crate::inference::DirichletPrior;
use crate::special::digamma;

/// The posterior-mean distribution Q over (context, next symbol).
///
/// Contexts with neither data nor an explicit prior row all share the
/// default prior row; they are stored once with a multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct PmeDistribution {
    order: usize,
    alphabet_size: usize,
    beta: f64,
    /// (n + α) per symbol for every context with data or an explicit prior.
    rows: BTreeMap<u64, Vec<f64>>,
    default_mass: Vec<f64>,
    default_multiplicity: f64,
}

impl PmeDistribution {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    /// β_k = Σ (n + α) over all contexts and symbols.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn mass(&self, context: &[u8]) -> &[f64] {
        let code = Word::from_symbols(context, self.alphabet_size)
            .expect("context symbols must lie in the alphabet")
            .code();
        self.rows.get(&code).unwrap_or(&self.default_mass)
    }

    /// q(h).
    pub fn context_weight(&self, context: &[u8]) -> f64 {
        self.mass(context).iter().sum::<f64>() / self.beta
    }

    /// q(s | h).
    pub fn transition(&self, context: &[u8], symbol: u8) -> f64 {
        let m = self.mass(context);
        m[symbol as usize] / m.iter().sum::<f64>()
    }

    /// Each distinct context row with how many contexts share it.
    fn classes(&self) -> impl Iterator<Item = (f64, &[f64])> + '_ {
        self.rows
            .values()
            .map(|r| (1.0, r.as_slice()))
            .chain(std::iter::once((
                self.default_multiplicity,
                self.default_mass.as_slice(),
            )))
            .filter(|(mult, _)| *mult > 0.0)
    }

    /// H_k[Q]: entropy of the context weights, in bits.
    pub fn context_entropy(&self) -> f64 {
        self.classes()
            .map(|(mult, m)| {
                let q = m.iter().sum::<f64>() / self.beta;
                -mult * q * q.log2()
            })
            .sum()
    }

    /// H_{k+1}[Q]: entropy of the joint q(h) q(s|h), in bits.
    pub fn joint_entropy(&self) -> f64 {
        self.classes()
            .map(|(mult, m)| {
                mult * m
                    .iter()
                    .map(|&ms| {
                        let q = ms / self.beta;
                        -q * q.log2()
                    })
                    .sum::<f64>()
            })
            .sum()
    }

    /// Σ_h q(h); one up to rounding.
    pub fn total_context_weight(&self) -> f64 {
        self.classes()
            .map(|(mult, m)| mult * m.iter().sum::<f64>() / self.beta)
            .sum()
    }
}

pub fn pme_distribution(counts: &CountTable, prior: &DirichletPrior) -> Result<PmeDistribution> {
    prior.check_matches(counts)?;
    let mut rows: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for (code, alpha) in prior.explicit_rows() {
        rows.insert(code, alpha.to_vec());
    }
    for (ctx, n) in counts.rows() {
        let alpha = prior.row_by_code(ctx.code());
        rows.insert(
            ctx.code(),
            n.iter().zip(alpha).map(|(&n, &a)| n as f64 + a).collect(),
        );
    }
    let default_mass = prior.default_row().to_vec();
    let default_multiplicity = (counts.num_contexts() - rows.len() as u64) as f64;
    let beta = rows.values().map(|r| r.iter().sum::<f64>()).sum::<f64>()
        + default_multiplicity * default_mass.iter().sum::<f64>();
    Ok(PmeDistribution {
        order: counts.order(),
        alphabet_size: counts.alphabet_size(),
        beta,
        rows,
        default_mass,
        default_multiplicity,
    })
}

/// Entropy-rate estimates for one order, all in bits per symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub order: usize,
    /// Posterior expectation of D[Q‖P] + h[Q].
    pub expected_info: f64,
    /// H_{k+1}[Q] − H_k[Q].
    pub h_rate_q: f64,
    /// A^k (A − 1) / (2 β_k ln 2).
    pub kl_correction: f64,
}

impl EntropyEstimate {
    /// Large-count approximation of `expected_info`.
    pub fn asymptotic(&self) -> f64 {
        self.h_rate_q + self.kl_correction
    }
}

fn kl_correction(pme: &PmeDistribution) -> f64 {
    let contexts = (pme.alphabet_size as f64).powi(pme.order as i32);
    contexts * (pme.alphabet_size as f64 - 1.0) / (2.0 * pme.beta * LN_2)
}

pub fn expected_info(counts: &CountTable, prior: &DirichletPrior) -> Result<EntropyEstimate> {
    let pme = pme_distribution(counts, prior)?;
    // β q(h) = (n + α)(h) and β q(h) q(s|h) = (n + α)(s·h), so each context
    // contributes [m_h ψ(m_h) − Σ_s m_s ψ(m_s)] / β.
    let mut sum = 0.0;
    for (mult, m) in pme.classes() {
        let m_h: f64 = m.iter().sum();
        let mut term = m_h * digamma(m_h)?;
        for &m_s in m {
            term -= m_s * digamma(m_s)?;
        }
        sum += mult * term;
    }
    Ok(EntropyEstimate {
        order: pme.order,
        expected_info: sum / (pme.beta * LN_2),
        h_rate_q: pme.joint_entropy() - pme.context_entropy(),
        kl_correction: kl_correction(&pme),
    })
}

/// `H_{k+1}[Q] − H_k[Q] + A^k (A − 1) / (2 β_k ln 2)`, without any digamma
/// evaluations. Accurate once every (n + α) is large.
pub fn asymptotic_info(counts: &CountTable, prior: &DirichletPrior) -> Result<f64> {
    let pme = pme_distribution(counts, prior)?;
    Ok(pme.joint_entropy() - pme.context_entropy() + kl_correction(&pme))
}
