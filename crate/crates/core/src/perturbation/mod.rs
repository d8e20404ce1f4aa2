//! Entropy and generating functions of perturbed shifts `X_K`.
//!
//! Every engine reports its closed-form answer next to the counting
//! oracle's numbers; see [`OracleCheck`].

mod decay;
mod gap;
mod sft;
mod sofic;
mod structure;

pub use decay::{decay_profile, DecayRow, WordFamily};
pub use gap::{dgap_characteristic, dgap_perturb_entropy, sgap_perturb_gf};
pub use sft::{essentialize, sft_entropy_single, sft_multi_gf, single_word_characteristic};
pub use sofic::{sofic_perturb, sofic_perturb_set, SoficPerturbation};
pub use structure::{check_structure, Irreducibility, StructureReport, SyncCertificate};

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::automata::LanguageAutomaton;
use crate::error::{Error, Result};
use crate::poly::{series_expand, Polynomial, Rational, RationalFunction, SeriesPrefix, DEFAULT_TOL};
use crate::word::{Symbol, Word};

/// Agreement threshold between a closed-form `λ` and the oracle.
pub const ORACLE_LAMBDA_TOL: f64 = 1e-6;

/// Smallest oracle horizon the engines accept.
pub const MIN_ORACLE_N: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EngineOptions {
    pub tol: f64,
    /// Horizon of the oracle comparison (clamped to at least 6).
    pub n_max: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, n_max: 12 }
    }
}

impl EngineOptions {
    pub fn horizon(&self) -> usize {
        self.n_max.max(MIN_ORACLE_N)
    }
}

/// Forbidden words with no word a subword of another, sorted by length
/// and then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForbiddenSet {
    words: Vec<Word>,
}

impl ForbiddenSet {
    pub fn new(words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let mut words: Vec<Word> = words.into_iter().collect();
        if words.iter().any(|w| w.is_empty()) {
            return Err(Error::Invalid("forbidden words must be nonempty".into()));
        }
        words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        words.dedup();
        let mut kept: Vec<Word> = Vec::with_capacity(words.len());
        for w in words {
            if !kept.iter().any(|k| k.is_subword_of(&w)) {
                kept.push(w);
            }
        }
        Ok(Self { words: kept })
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

fn ser_display<S: Serializer, T: ToString>(v: &[T], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
}

fn ser_entropy<S: Serializer>(h: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if h.is_finite() {
        s.serialize_some(h)
    } else {
        s.serialize_none()
    }
}

/// The counting oracle's view of the same shift.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleCheck {
    pub n_max: usize,
    #[serde(serialize_with = "ser_display")]
    pub counts: Vec<BigUint>,
    /// Whether the normalized series equals `counts`; `None` when the
    /// engine produces no counting series for this shift.
    pub series_matches: Option<bool>,
    pub oracle_lambda: f64,
    pub lambda_agrees: bool,
}

impl OracleCheck {
    pub fn new(la: &LanguageAutomaton, n_max: usize, lambda: f64) -> Self {
        let growth = la.growth();
        let oracle_lambda = if la.is_empty() { 0.0 } else { growth.value };
        let slack = ORACLE_LAMBDA_TOL.max(growth.upper - growth.lower);
        Self {
            n_max,
            counts: la.counts(n_max),
            series_matches: None,
            oracle_lambda,
            lambda_agrees: (lambda - oracle_lambda).abs() <= slack,
        }
    }

    pub fn agrees(&self) -> bool {
        self.lambda_agrees && self.series_matches != Some(false)
    }
}

/// Outcome of a perturbation engine. `lambda = 0` encodes an empty
/// perturbed shift, whose entropy is `-∞` (serialized as `null`).
#[derive(Clone, Debug, Serialize)]
pub struct PerturbationResult {
    pub engine: &'static str,
    pub lambda: f64,
    #[serde(serialize_with = "ser_entropy")]
    pub entropy: f64,
    pub ambient_lambda: f64,
    /// Polynomial whose largest real zero (or pole) is `lambda`.
    pub characteristic: Option<Polynomial>,
    pub generating_function: Option<RationalFunction>,
    /// `j` in `F = z^j · F_raw - c`.
    pub normalization_shift: Option<i32>,
    pub series: Option<SeriesPrefix>,
    pub oracle: OracleCheck,
    pub notes: Vec<String>,
}

impl PerturbationResult {
    fn new(engine: &'static str, lambda: f64, ambient_lambda: f64, oracle: OracleCheck) -> Self {
        Self {
            engine,
            lambda,
            entropy: entropy_of(lambda),
            ambient_lambda,
            characteristic: None,
            generating_function: None,
            normalization_shift: None,
            series: None,
            oracle,
            notes: Vec::new(),
        }
    }

    fn empty(engine: &'static str, ambient_lambda: f64, la: &LanguageAutomaton, n_max: usize) -> Self {
        let mut r = Self::new(engine, 0.0, ambient_lambda, OracleCheck::new(la, n_max, 0.0));
        r.notes.push("perturbed shift is empty".into());
        r
    }

    pub fn is_empty_shift(&self) -> bool {
        self.lambda == 0.0
    }

    pub fn oracle_agrees(&self) -> bool {
        self.oracle.agrees()
    }

    /// Attaches the generating function and compares its series with the
    /// oracle counts.
    fn with_series(mut self, f: RationalFunction, shift: i32) -> Self {
        let s = series_expand(&f, self.oracle.n_max);
        self.oracle.series_matches = Some(series_equals_counts(&s, &self.oracle.counts));
        self.generating_function = Some(f);
        self.normalization_shift = Some(shift);
        self.series = Some(s);
        self
    }
}

pub fn entropy_of(lambda: f64) -> f64 {
    if lambda > 0.0 {
        lambda.ln()
    } else {
        f64::NEG_INFINITY
    }
}

pub fn series_equals_counts(s: &SeriesPrefix, counts: &[BigUint]) -> bool {
    s.principal.iter().all(|c| c.is_zero())
        && s.coeffs.len() == counts.len()
        && s.coeffs
            .iter()
            .zip(counts)
            .all(|(a, c)| *a == Rational::from_integer(BigInt::from(c.clone())))
}

/// Picks the monomial normalization `z^j · raw - correction` whose series
/// reproduces the oracle counts, trying the expected shift first. Falls
/// back to the first shift giving `f(0) = 1`, then to `expected`.
fn normalize(raw: &RationalFunction, correction: i64, expected: i32, counts: &[BigUint]) -> (i32, RationalFunction) {
    let n = counts.len() - 1;
    let candidates: Vec<i32> = std::iter::once(expected)
        .chain((-3..=3).filter(|&j| j != expected))
        .collect();
    let c = RationalFunction::constant(Rational::from_integer(correction.into()));
    let at = |j: i32| &(raw * &RationalFunction::z_pow(j as i64)) - &c;
    for &j in &candidates {
        let f = at(j);
        if series_equals_counts(&series_expand(&f, n), counts) {
            return (j, f);
        }
    }
    for &j in &candidates {
        let f = at(j);
        let s = series_expand(&f, 0);
        if s.principal.iter().all(|c| c.is_zero()) && s.coeffs[0] == Rational::from_integer(1.into()) {
            return (j, f);
        }
    }
    (expected, at(expected))
}

/// `Σ z^ℓ` over the `ℓ` with the suffix of `u` of length `ℓ + 1` equal to
/// the prefix of `v` of that length; lengths may differ.
fn overlap_polynomial(u: &[Symbol], v: &[Symbol]) -> Polynomial {
    let n = u.len().min(v.len());
    let coeffs: Vec<i64> = (0..n).map(|l| (u[u.len() - 1 - l..] == v[..=l]) as i64).collect();
    Polynomial::from_i64(&coeffs)
}
