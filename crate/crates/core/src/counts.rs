//! Word statistics over symbol sequences.
//!
//! Words are packed into a `u64` in base `A`, first symbol most significant,
//! so a word of length `L` needs `A^L` to fit in 64 bits. Tables are sparse
//! and ordered, which keeps every floating-point reduction over them
//! deterministic.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::symbolize::SymbolSequence;

/// `A^len`, or an overflow error.
pub fn alphabet_power(alphabet_size: usize, len: usize) -> Result<u64> {
    u32::try_from(len)
        .ok()
        .and_then(|l| (alphabet_size as u64).checked_pow(l))
        .ok_or_else(|| Error::Overflow(format!("{alphabet_size}^{len}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    len: usize,
    code: u64,
}

impl Word {
    pub fn from_symbols(symbols: &[u8], alphabet_size: usize) -> Result<Self> {
        alphabet_power(alphabet_size, symbols.len())?;
        let mut code = 0u64;
        for &s in symbols {
            if s as usize >= alphabet_size {
                return Err(Error::InvalidArgument(format!(
                    "symbol {s} outside alphabet of size {alphabet_size}"
                )));
            }
            code = code * alphabet_size as u64 + s as u64;
        }
        Ok(Self {
            len: symbols.len(),
            code,
        })
    }

    pub(crate) fn from_code(code: u64, len: usize) -> Self {
        Self { len, code }
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn symbols(&self, alphabet_size: usize) -> Vec<u8> {
        let a = alphabet_size as u64;
        let mut out = vec![0u8; self.len];
        let mut code = self.code;
        for slot in out.iter_mut().rev() {
            *slot = (code % a) as u8;
            code /= a;
        }
        out
    }

    /// Digits for alphabets up to 10 symbols, dot-separated otherwise.
    pub fn render(&self, alphabet_size: usize) -> String {
        let syms = self.symbols(alphabet_size);
        if syms.is_empty() {
            return "ε".to_string();
        }
        let mut s = String::new();
        for (i, sym) in syms.iter().enumerate() {
            if alphabet_size > 10 && i > 0 {
                s.push('.');
            }
            write!(s, "{sym}").unwrap();
        }
        s
    }
}

/// Overlapping length-`L` window counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordCounts {
    word_len: usize,
    alphabet_size: usize,
    table: BTreeMap<u64, u64>,
    total: u64,
}

impl WordCounts {
    pub fn word_len(&self) -> usize {
        self.word_len
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, word: &[u8]) -> u64 {
        if word.len() != self.word_len {
            return 0;
        }
        Word::from_symbols(word, self.alphabet_size)
            .ok()
            .and_then(|w| self.table.get(&w.code))
            .copied()
            .unwrap_or(0)
    }

    /// Observed words in code order with their counts.
    pub fn iter(&self) -> impl Iterator<Item = (Word, u64)> + '_ {
        self.table
            .iter()
            .map(|(&code, &n)| (Word::from_code(code, self.word_len), n))
    }

    pub fn distinct(&self) -> usize {
        self.table.len()
    }

    /// Counts of the length `L − 1` prefixes of the observed words.
    fn prefix_marginal(&self) -> Vec<u64> {
        let a = self.alphabet_size as u64;
        let mut prefixes: BTreeMap<u64, u64> = BTreeMap::new();
        for (&code, &n) in &self.table {
            *prefixes.entry(code / a).or_default() += n;
        }
        prefixes.into_values().collect()
    }
}

fn entropy_bits(counts: impl IntoIterator<Item = u64>, total: u64) -> f64 {
    let total = total as f64;
    counts
        .into_iter()
        .filter(|&n| n > 0)
        .map(|n| {
            let p = n as f64 / total;
            -p * p.log2()
        })
        .sum()
}

pub fn count_words(seq: &SymbolSequence, word_len: usize) -> Result<WordCounts> {
    if word_len == 0 {
        return Err(Error::InvalidArgument(
            "word length must be at least 1".into(),
        ));
    }
    if seq.len() < word_len {
        return Err(Error::SequenceTooShort {
            len: seq.len(),
            needed: word_len,
        });
    }
    let a = seq.alphabet_size() as u64;
    let modulus = alphabet_power(seq.alphabet_size(), word_len)?;
    let symbols = seq.symbols();
    let mut table = BTreeMap::new();
    let mut code = 0u64;
    for (t, &s) in symbols.iter().enumerate() {
        code = (code % (modulus / a)) * a + s as u64;
        if t + 1 >= word_len {
            *table.entry(code).or_insert(0u64) += 1;
        }
    }
    Ok(WordCounts {
        word_len,
        alphabet_size: seq.alphabet_size(),
        table,
        total: (symbols.len() - word_len + 1) as u64,
    })
}

/// Shannon entropy, in bits, of the empirical word distribution.
pub fn block_entropy(wc: &WordCounts) -> f64 {
    if wc.total == 0 {
        return 0.0;
    }
    entropy_bits(wc.table.values().copied(), wc.total)
}

/// Finite-length entropy-rate estimate `H_L − H_{L−1}` with `H_0 = 0`.
///
/// Both block entropies are taken over the same set of `N − L + 1` windows,
/// `H_{L−1}` from their prefixes, so the estimate is a conditional entropy
/// and never negative.
pub fn entropy_rate_l(seq: &SymbolSequence, word_len: usize) -> Result<f64> {
    let wc = count_words(seq, word_len)?;
    let h_l = block_entropy(&wc);
    if word_len == 1 {
        return Ok(h_l);
    }
    let h_prev = entropy_bits(wc.prefix_marginal(), wc.total);
    Ok((h_l - h_prev).max(0.0))
}

/// Markov sufficient statistics: counts of each symbol following each
/// length-`k` context, starting after the first `k` symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    order: usize,
    alphabet_size: usize,
    rows: BTreeMap<u64, Vec<u64>>,
    total: u64,
}

impl CountTable {
    /// Builds a table directly from per-context rows (context symbols → counts
    /// per next symbol).
    pub fn from_rows(
        order: usize,
        alphabet_size: usize,
        rows: impl IntoIterator<Item = (Vec<u8>, Vec<u64>)>,
    ) -> Result<Self> {
        alphabet_power(alphabet_size, order + 1)?;
        let mut table = BTreeMap::new();
        let mut total = 0;
        for (ctx, row) in rows {
            if ctx.len() != order || row.len() != alphabet_size {
                return Err(Error::Mismatch(format!(
                    "row for context of length {} with {} counts in an order-{order} table over {alphabet_size} symbols",
                    ctx.len(),
                    row.len()
                )));
            }
            let code = Word::from_symbols(&ctx, alphabet_size)?.code;
            total += row.iter().sum::<u64>();
            let entry = table.entry(code).or_insert_with(|| vec![0; alphabet_size]);
            for (e, n) in entry.iter_mut().zip(row) {
                *e += n;
            }
        }
        table.retain(|_, row: &mut Vec<u64>| row.iter().any(|&n| n > 0));
        Ok(Self {
            order,
            alphabet_size,
            rows: table,
            total,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    /// Σ n(s·context) over all entries.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of possible contexts, `A^k`.
    pub fn num_contexts(&self) -> u64 {
        // Validated at construction.
        (self.alphabet_size as u64).pow(self.order as u32)
    }

    pub fn count(&self, context: &[u8], symbol: u8) -> u64 {
        self.row(context)
            .and_then(|r| r.get(symbol as usize))
            .copied()
            .unwrap_or(0)
    }

    pub fn context_total(&self, context: &[u8]) -> u64 {
        self.row(context).map(|r| r.iter().sum()).unwrap_or(0)
    }

    fn row(&self, context: &[u8]) -> Option<&Vec<u64>> {
        if context.len() != self.order {
            return None;
        }
        let code = Word::from_symbols(context, self.alphabet_size).ok()?.code;
        self.rows.get(&code)
    }

    /// Visited contexts in code order with their per-symbol counts.
    pub fn rows(&self) -> impl Iterator<Item = (Word, &[u64])> + '_ {
        self.rows
            .iter()
            .map(|(&code, row)| (Word::from_code(code, self.order), row.as_slice()))
    }

    pub fn visited_contexts(&self) -> usize {
        self.rows.len()
    }
}

pub fn transition_counts(seq: &SymbolSequence, order: usize) -> Result<CountTable> {
    if seq.len() < order + 1 {
        return Err(Error::SequenceTooShort {
            len: seq.len(),
            needed: order + 1,
        });
    }
    let a = seq.alphabet_size();
    alphabet_power(a, order + 1)?;
    let modulus = alphabet_power(a, order)?;
    let symbols = seq.symbols();
    let mut rows: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    let mut ctx = 0u64;
    for &s in &symbols[..order] {
        ctx = (ctx * a as u64 + s as u64) % modulus;
    }
    for &s in &symbols[order..] {
        rows.entry(ctx).or_insert_with(|| vec![0; a])[s as usize] += 1;
        ctx = (ctx * a as u64 + s as u64) % modulus;
    }
    Ok(CountTable {
        order,
        alphabet_size: a,
        rows,
        total: (symbols.len() - order) as u64,
    })
}
