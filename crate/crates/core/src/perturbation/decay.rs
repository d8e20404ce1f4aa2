use serde::Serialize;

use crate::error::{Error, Result};
use crate::system::System;
use crate::word::{Symbol, Word};

use super::{EngineOptions, ForbiddenSet};

/// A family `w_n` of words indexed by length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WordFamily {
    /// `s^n`.
    Power { symbol: Symbol },
    /// Length-`n` prefixes of `pre · period^∞`.
    Prefixes { pre: Word, period: Word },
    /// Given words; the length index is the word length.
    Explicit { words: Vec<Word> },
}

impl WordFamily {
    pub fn word(&self, n: usize) -> Option<Word> {
        match self {
            WordFamily::Power { symbol } => Some(Word::repeat(*symbol, n)),
            WordFamily::Prefixes { pre, period } => {
                if period.is_empty() && n > pre.len() {
                    return None;
                }
                let tail = period.symbols().iter().cycle();
                Some(Word::new(pre.symbols().iter().chain(tail).take(n).copied().collect()))
            }
            WordFamily::Explicit { words } => words.iter().find(|w| w.len() == n).cloned(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayRow {
    pub n: usize,
    pub word: Word,
    pub lambda: f64,
    /// `λ - λ_n`.
    pub gap: f64,
    /// `(λ - λ_n) · λ^n`.
    pub scaled_gap: f64,
    /// `n · (h - h_n)`.
    pub scaled_entropy_gap: f64,
}

/// One row per `n` in `range` for which the family has a word.
pub fn decay_profile(
    system: &System,
    family: &WordFamily,
    range: std::ops::RangeInclusive<usize>,
    opts: EngineOptions,
) -> Result<Vec<DecayRow>> {
    let ambient = system.ambient_lambda(opts.tol)?;
    let mut rows = Vec::new();
    for n in range {
        let Some(word) = family.word(n) else { continue };
        let r = system.perturb(&ForbiddenSet::new([word.clone()])?, opts)?;
        if r.is_empty_shift() {
            return Err(Error::Invalid(format!("forbidding {word} empties the shift")));
        }
        let gap = ambient - r.lambda;
        rows.push(DecayRow {
            n,
            word,
            lambda: r.lambda,
            gap,
            scaled_gap: gap * ambient.powi(n as i32),
            scaled_entropy_gap: n as f64 * (ambient.ln() - r.entropy),
        });
    }
    Ok(rows)
}
