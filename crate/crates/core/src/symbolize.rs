//! Threshold partitions of the unit interval.

use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};

/// A partition of [0, 1] into consecutive cells `[t_{i-1}, t_i)`, the last
/// cell closed on the right. Symbol `i` is the number of thresholds `≤ x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionSpec {
    thresholds: Vec<f64>,
}

impl PartitionSpec {
    /// Binary instrument `{0: [0, d), 1: [d, 1]}`.
    pub fn binary(decision_point: f64) -> Result<Self> {
        Self::new(vec![decision_point])
    }

    pub fn new(thresholds: Vec<f64>) -> Result<Self> {
        if thresholds.is_empty() || thresholds.len() > u8::MAX as usize {
            return Err(Error::InvalidArgument(format!(
                "a partition needs between 1 and {} thresholds, got {}",
                u8::MAX,
                thresholds.len()
            )));
        }
        for &t in &thresholds {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::Domain {
                    what: "decision point",
                    value: t,
                    expected: "0 <= d <= 1",
                });
            }
        }
        if thresholds.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument(
                "partition thresholds must be non-decreasing".into(),
            ));
        }
        Ok(Self { thresholds })
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    /// The threshold of a binary partition (the first threshold otherwise).
    pub fn decision_point(&self) -> f64 {
        self.thresholds[0]
    }

    pub fn alphabet_size(&self) -> usize {
        self.thresholds.len() + 1
    }

    pub fn symbol(&self, x: f64) -> u8 {
        self.thresholds.iter().take_while(|&&t| t <= x).count() as u8
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolSequence {
    symbols: Vec<u8>,
    alphabet_size: usize,
}

impl SymbolSequence {
    pub fn new(symbols: Vec<u8>, alphabet_size: usize) -> Result<Self> {
        if !(2..=256).contains(&alphabet_size) {
            return Err(Error::InvalidArgument(format!(
                "alphabet size must be in 2..=256, got {alphabet_size}"
            )));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s as usize >= alphabet_size) {
            return Err(Error::InvalidArgument(format!(
                "symbol {s} outside alphabet of size {alphabet_size}"
            )));
        }
        Ok(Self {
            symbols,
            alphabet_size,
        })
    }

    /// Parses a string of decimal digits such as `"0110"`.
    pub fn from_digits(digits: &str, alphabet_size: usize) -> Result<Self> {
        let symbols = digits
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::InvalidArgument(format!("not a digit: {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(symbols, alphabet_size)
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Applies the partition operator to every state.
pub fn symbolize(traj: &Trajectory, part: &PartitionSpec) -> SymbolSequence {
    SymbolSequence {
        symbols: traj.states().iter().map(|&x| part.symbol(x)).collect(),
        alphabet_size: part.alphabet_size(),
    }
}

/// `count` evenly spaced binary partitions with decision points spanning
/// [0, 1] inclusive.
pub fn decision_grid(count: usize) -> Result<Vec<PartitionSpec>> {
    if count < 2 {
        return Err(Error::InvalidArgument(format!(
            "decision grid needs at least 2 points, got {count}"
        )));
    }
    let last = (count - 1) as f64;
    (0..count)
        .map(|i| PartitionSpec::binary(i as f64 / last))
        .collect()
}
