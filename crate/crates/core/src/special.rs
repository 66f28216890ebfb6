//! Special functions used by the inference code.
//!
//! `digamma` is implemented here by upward recurrence into the asymptotic
//! (Stirling) region. `ln_gamma` delegates to `statrs`.

use crate::error::{Error, Result};

/// Below this argument the recurrence ψ(x) = ψ(x + 1) − 1/x is applied.
const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

/// Coefficients B₂ₙ / (2n) of the asymptotic expansion
/// ψ(x) ~ ln x − 1/(2x) − Σ B₂ₙ / (2n x²ⁿ), for n = 1..7.
const ASYMPTOTIC_COEFFS: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// The digamma function ψ(x) = d/dx ln Γ(x) for x > 0.
///
/// Absolute accuracy is about 1e-15 over the positive axis: at x ≥ 10 the
/// first omitted term of the series is below 5e-17.
pub fn digamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 || x.is_infinite() {
        return Err(Error::Domain {
            what: "digamma argument",
            value: x,
            expected: "finite x > 0",
        });
    }
    let mut shift = 0.0;
    let mut z = x;
    while z < ASYMPTOTIC_THRESHOLD {
        shift += 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    // Horner evaluation of Σ c_n z^{-2n}.
    let series = ASYMPTOTIC_COEFFS
        .iter()
        .rev()
        .fold(0.0, |acc, &c| (acc + c) * inv2);
    Ok(z.ln() - 0.5 / z - series - shift)
}

/// Natural log of the gamma function for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// ln Σ exp(v) without overflow; −∞ for an empty or all −∞ input.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max.is_infinite() {
        return max;
    }
    let sum: f64 = values.iter().map(|&v| (v - max).exp()).sum();
    max + sum.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn digamma_at_one_is_minus_euler_gamma() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-14);
    }

    #[test]
    fn digamma_at_half() {
        let expected = -EULER_GAMMA - 2.0 * std::f64::consts::LN_2;
        assert!((digamma(0.5).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn digamma_rejects_non_positive() {
        assert!(digamma(0.0).is_err());
        assert!(digamma(-1.5).is_err());
        assert!(digamma(f64::NAN).is_err());
    }

    #[test]
    fn digamma_recurrence_across_threshold() {
        for &x in &[0.01, 0.7, 9.5, 9.999, 10.0, 10.5, 123.4] {
            let lhs = digamma(x + 1.0).unwrap() - digamma(x).unwrap();
            assert!((lhs - 1.0 / x).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn ln_gamma_small_integers() {
        // ln Γ(n) = ln (n-1)!
        let mut fact: f64 = 1.0;
        for n in 1..25u32 {
            if n > 1 {
                fact *= (n - 1) as f64;
            }
            assert!((ln_gamma(n as f64) - fact.ln()).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn log_sum_exp_edges() {
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY; 3]), f64::NEG_INFINITY);
        let v = log_sum_exp(&[-1000.0, -1000.0]);
        assert!((v - (-1000.0 + std::f64::consts::LN_2)).abs() < 1e-12);
        assert!((log_sum_exp(&[0.0, f64::NEG_INFINITY]) - 0.0).abs() < 1e-15);
    }
}
