//! Alphabets, finite words and correlation sets between words.
//!
//! Symbols are small integers `0..N`. Words are written as strings where
//! `0`-`9` stand for the symbols 0..=9 and `a`-`z` for 10..=35.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

pub type Symbol = u32;

/// Finite alphabet `{0, .., size-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    size: u32,
}

impl Alphabet {
    pub fn new(size: u32) -> Result<Self> {
        if size == 0 {
            return Err(Error::Invalid("alphabet size must be at least 1".into()));
        }
        Ok(Self { size })
    }

    pub fn binary() -> Self {
        Self { size: 2 }
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        0..self.size
    }

    /// Checks that every symbol of `word` belongs to the alphabet.
    pub fn check(&self, word: &Word) -> Result<()> {
        match word.0.iter().find(|&&s| s >= self.size) {
            Some(&symbol) => Err(Error::SymbolOutOfRange { symbol, size: self.size }),
            None => Ok(()),
        }
    }

    /// All words of length `n`, in lexicographic order.
    pub fn words(&self, n: usize) -> Vec<Word> {
        let mut out = vec![Word(Vec::with_capacity(n))];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w| {
                    self.symbols().map(move |s| {
                        let mut v = w.0.clone();
                        v.push(s);
                        Word(v)
                    })
                })
                .collect();
        }
        out
    }
}

/// A finite word. The empty word is representable but most operations
/// require `len() >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    /// Builds a word and checks it against `alphabet`.
    pub fn over(alphabet: Alphabet, symbols: Vec<Symbol>) -> Result<Self> {
        let w = Word(symbols);
        alphabet.check(&w)?;
        Ok(w)
    }

    pub fn repeat(symbol: Symbol, n: usize) -> Self {
        Word(vec![symbol; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    /// Smallest alphabet containing every symbol of the word.
    pub fn min_alphabet(&self) -> u32 {
        self.0.iter().max().map_or(1, |&m| m + 1)
    }

    pub fn reverse(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// True iff `self` occurs as a (contiguous) subword of `other`.
    pub fn is_subword_of(&self, other: &Word) -> bool {
        if self.is_empty() {
            return true;
        }
        other.0.windows(self.len()).any(|win| win == self.0.as_slice())
    }

    pub fn contains(&self, other: &Word) -> bool {
        other.is_subword_of(self)
    }

    /// Length of the leading run of `symbol`.
    pub fn leading_run(&self, symbol: Symbol) -> usize {
        self.0.iter().take_while(|&&s| s == symbol).count()
    }

    /// Length of the trailing run of `symbol`.
    pub fn trailing_run(&self, symbol: Symbol) -> usize {
        self.0.iter().rev().take_while(|&&s| s == symbol).count()
    }

    pub fn first(&self) -> Option<Symbol> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Symbol> {
        self.0.last().copied()
    }
}

fn symbol_char(s: Symbol) -> char {
    std::char::from_digit(s, 36).unwrap_or('?')
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| s < 36) {
            for &s in &self.0 {
                write!(f, "{}", symbol_char(s))?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts base-36 digit strings (`"0110"`, `"1a2"`) or a bracketed
    /// comma-separated list (`"[0,12,3]"`) for larger alphabets.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            if inner.trim().is_empty() {
                return Ok(Word::default());
            }
            return inner
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<Symbol>()
                        .map_err(|_| Error::Parse(format!("bad symbol {t:?} in word {s:?}")))
                })
                .collect::<Result<Vec<_>>>()
                .map(Word);
        }
        s.chars()
            .map(|c| {
                c.to_digit(36)
                    .ok_or_else(|| Error::Parse(format!("bad symbol {c:?} in word {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Overlap positions `l` such that the suffix of the left word of length
/// `l+1` equals the prefix of the right word of length `l+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CorrelationSet {
    len: usize,
    positions: BTreeSet<usize>,
}

impl CorrelationSet {
    pub fn new(len: usize, positions: impl IntoIterator<Item = usize>) -> Result<Self> {
        let positions: BTreeSet<usize> = positions.into_iter().collect();
        if positions.iter().any(|&p| p >= len) {
            return Err(Error::Invalid(format!("correlation position outside [0, {len})")));
        }
        Ok(Self { len, positions })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn positions(&self) -> &BTreeSet<usize> {
        &self.positions
    }

    pub fn contains(&self, l: usize) -> bool {
        self.positions.contains(&l)
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// `(u,w)_z = sum of z^l over the positions`.
    pub fn polynomial(&self) -> Polynomial {
        let mut coeffs = vec![0i64; self.len.max(1)];
        for &p in &self.positions {
            coeffs[p] = 1;
        }
        Polynomial::from_i64(&coeffs)
    }

    /// Removes the full-overlap position `len-1`.
    pub fn without_full(&self) -> CorrelationSet {
        let mut positions = self.positions.clone();
        positions.remove(&(self.len.saturating_sub(1)));
        CorrelationSet { len: self.len, positions }
    }
}

/// Correlation set of two words of equal length.
pub fn correlate(u: &Word, w: &Word) -> Result<CorrelationSet> {
    if u.len() != w.len() {
        return Err(Error::LengthMismatch { left: u.len(), right: w.len() });
    }
    let n = u.len();
    let positions = (0..n).filter(|&l| u.0[n - 1 - l..] == w.0[..=l]);
    CorrelationSet::new(n, positions)
}

/// Self-correlation `(w,w)`.
pub fn autocorrelation(w: &Word) -> CorrelationSet {
    correlate(w, w).expect("equal lengths")
}

/// A word is prime when its only self-overlap is the trivial one.
pub fn is_prime(w: &Word) -> bool {
    let c = autocorrelation(w);
    c.positions().len() == 1 && c.contains(w.len().saturating_sub(1))
}

pub fn reverse(w: &Word) -> Word {
    w.reverse()
}
