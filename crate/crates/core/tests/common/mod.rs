//! Independent oracles shared by the integration tests. Nothing here calls
//! the evidence, entropy or digamma code it is used to check.

#![allow(dead_code, clippy::type_complexity)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use symdyn::symbolize::SymbolSequence;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// ψ(x) = −γ + Σ_{n≥0} (x − 1) / ((n + 1)(n + x)), summed for `terms` terms
/// with the remainder ψ(M + x) − ψ(M + 1) taken from the three-term
/// large-argument expansion ln z − 1/(2z) − 1/(12 z²).
pub fn digamma_series(x: f64) -> f64 {
    const TERMS: usize = 200_000;
    let partial =
        compensated_sum((0..TERMS).map(|n| (x - 1.0) / ((n as f64 + 1.0) * (n as f64 + x))));
    let big = |z: f64| z.ln() - 0.5 / z - 1.0 / (12.0 * z * z);
    let m = TERMS as f64;
    let tail = big(m + x) - big(m + 1.0);
    -EULER_GAMMA + partial + tail
}

/// ψ(n) = H_{n−1} − γ for integer n ≥ 1.
pub fn digamma_integer(n: u64) -> f64 {
    compensated_sum((1..n).map(|i| 1.0 / i as f64)) - EULER_GAMMA
}

pub fn random_binary(rng: &mut impl Rng, len: usize) -> SymbolSequence {
    SymbolSequence::new((0..len).map(|_| rng.random_range(0..2u8)).collect(), 2).unwrap()
}

/// Per-context transition counts by direct enumeration, indexed by the
/// context read as a base-2 number (oldest symbol most significant).
pub fn naive_counts(symbols: &[u8], k: usize) -> Vec<[u64; 2]> {
    let mut rows = vec![[0u64; 2]; 1 << k];
    for t in k..symbols.len() {
        let ctx = symbols[t - k..t]
            .iter()
            .fold(0usize, |c, &s| c * 2 + s as usize);
        rows[ctx][symbols[t] as usize] += 1;
    }
    rows
}

/// ln P(D | M_k) as a product of one-step posterior predictives
/// (n(s·h) + α) / (n(h) + 2α), updating the counts as the data arrive.
pub fn sequential_log_evidence(symbols: &[u8], k: usize, alpha: f64) -> f64 {
    let mut rows = vec![[0u64; 2]; 1 << k];
    let mut total = 0.0;
    for t in k..symbols.len() {
        let ctx = symbols[t - k..t]
            .iter()
            .fold(0usize, |c, &s| c * 2 + s as usize);
        let s = symbols[t] as usize;
        let row = &mut rows[ctx];
        total += ((row[s] as f64 + alpha) / ((row[0] + row[1]) as f64 + 2.0 * alpha)).ln();
        row[s] += 1;
    }
    total
}

pub struct MonteCarlo {
    pub mean: f64,
    pub std_error: f64,
}

pub fn mean_and_se(samples: impl Iterator<Item = f64>) -> MonteCarlo {
    let (mut n, mut mean, mut m2) = (0.0f64, 0.0f64, 0.0f64);
    for x in samples {
        n += 1.0;
        let delta = x - mean;
        mean += delta / n;
        m2 += delta * (x - mean);
    }
    MonteCarlo {
        mean,
        std_error: (m2 / (n - 1.0) / n).sqrt(),
    }
}

/// Draws p(1 | h) for a binary row from Beta(a0, a1) via two gamma variates.
pub fn beta_draw(rng: &mut impl Rng, a0: f64, a1: f64) -> f64 {
    let g0 = Gamma::new(a0, 1.0).unwrap().sample(rng);
    let g1 = Gamma::new(a1, 1.0).unwrap().sample(rng);
    g1 / (g0 + g1)
}

/// Evidence P(D | M_k) by averaging the likelihood over draws of every
/// context row from the Dirichlet(α, α) prior.
pub fn monte_carlo_evidence(
    symbols: &[u8],
    k: usize,
    alpha: f64,
    draws: usize,
    seed: u64,
) -> MonteCarlo {
    let counts = naive_counts(symbols, k);
    let mut rng = rng(seed);
    let prior = Gamma::new(alpha, 1.0).unwrap();
    mean_and_se((0..draws).map(|_| {
        counts
            .iter()
            .map(|&[n0, n1]| {
                let g0 = prior.sample(&mut rng);
                let g1 = prior.sample(&mut rng);
                let p1 = g1 / (g0 + g1);
                (1.0 - p1).powi(n0 as i32) * p1.powi(n1 as i32)
            })
            .product::<f64>()
    }))
}

/// Posterior average of D[Q‖P] + h[Q] = −Σ_{h,s} q(h) q(s|h) log₂ p(s|h),
/// with Q the posterior-mean distribution and P drawn row by row from the
/// Dirichlet posterior.
pub fn monte_carlo_expected_info(
    symbols: &[u8],
    k: usize,
    alpha: f64,
    draws: usize,
    seed: u64,
) -> MonteCarlo {
    let counts = naive_counts(symbols, k);
    let beta: f64 = counts
        .iter()
        .map(|r| (r[0] + r[1]) as f64 + 2.0 * alpha)
        .sum();
    let rows: Vec<(f64, [f64; 2], Gamma<f64>, Gamma<f64>)> = counts
        .iter()
        .map(|&[n0, n1]| {
            let a0 = n0 as f64 + alpha;
            let a1 = n1 as f64 + alpha;
            let q_h = (a0 + a1) / beta;
            (
                q_h,
                [a0 / (a0 + a1), a1 / (a0 + a1)],
                Gamma::new(a0, 1.0).unwrap(),
                Gamma::new(a1, 1.0).unwrap(),
            )
        })
        .collect();
    let mut rng = rng(seed);
    mean_and_se((0..draws).map(|_| {
        rows.iter()
            .map(|(q_h, q_s, g0, g1)| {
                let x0 = g0.sample(&mut rng);
                let x1 = g1.sample(&mut rng);
                let p = [x0 / (x0 + x1), x1 / (x0 + x1)];
                -q_h * (q_s[0] * p[0].log2() + q_s[1] * p[1].log2())
            })
            .sum::<f64>()
    }))
}

/// Binary Markov chain sample with p(1|0) = `p01`, p(1|1) = `p11`.
pub fn markov_chain(rng: &mut impl Rng, len: usize, p01: f64, p11: f64) -> SymbolSequence {
    let mut s = 0u8;
    let symbols = (0..len)
        .map(|_| {
            let p1 = if s == 0 { p01 } else { p11 };
            s = u8::from(rng.random::<f64>() < p1);
            s
        })
        .collect();
    SymbolSequence::new(symbols, 2).unwrap()
}

/// Entropy rate in bits of the chain above from its stationary distribution.
pub fn markov_entropy_rate(p01: f64, p11: f64) -> f64 {
    let h = |p: f64| {
        if p <= 0.0 || p >= 1.0 {
            0.0
        } else {
            -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
        }
    };
    // π1 = p01 / (p01 + p10)
    let p10 = 1.0 - p11;
    let pi1 = p01 / (p01 + p10);
    (1.0 - pi1) * h(p01) + pi1 * h(p11)
}
