//! Swap conjugacies between `X_u` and `X_w`.
//!
//! The swap code exchanges every occurrence of `u` with `w` and back. On a
//! finite word only occurrences lying entirely inside the word are
//! exchanged, which is the same as padding the word on both sides with a
//! symbol that occurs in neither `u` nor `w`.

use std::collections::HashSet;

use serde::Serialize;

use crate::automata::{word_endpoints, LabeledGraph, LanguageAutomaton};
use crate::error::{Error, Result};
use crate::perturbation::{sofic_perturb_set, EngineOptions, ForbiddenSet};
use crate::word::{autocorrelation, correlate, Symbol, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub reasons: Vec<String>,
}

/// Correlation and endpoint hypotheses for swapping `u` and `w` on `g`.
pub fn swap_admissible(g: &LabeledGraph, u: &Word, w: &Word) -> Result<Admissibility> {
    let mut reasons = correlation_failures(u, w)?;
    let (su, ru) = word_endpoints(g, u);
    let (sw, rw) = word_endpoints(g, w);
    if su.is_empty() {
        reasons.push(format!("{u} labels no walk"));
    }
    if sw.is_empty() {
        reasons.push(format!("{w} labels no walk"));
    }
    if su != sw {
        reasons.push(format!("initial vertices differ: {su:?} vs {sw:?}"));
    }
    if ru != rw {
        reasons.push(format!("terminal vertices differ: {ru:?} vs {rw:?}"));
    }
    Ok(Admissibility { admissible: reasons.is_empty(), reasons })
}

fn correlation_failures(u: &Word, w: &Word) -> Result<Vec<String>> {
    if u.len() != w.len() {
        return Err(Error::LengthMismatch { left: u.len(), right: w.len() });
    }
    let mut reasons = Vec::new();
    if u == w {
        return Ok(reasons);
    }
    let uu = autocorrelation(u);
    if uu != autocorrelation(w) {
        reasons.push(format!("(u,u) = {:?} but (w,w) = {:?}", uu.positions(), autocorrelation(w).positions()));
    }
    let cross = uu.without_full();
    for (a, b) in [(u, w), (w, u)] {
        let c = correlate(a, b)?;
        if c != cross {
            reasons.push(format!("({a},{b}) = {:?}, expected {:?}", c.positions(), cross.positions()));
        }
    }
    Ok(reasons)
}

/// The sliding block code with window `x_{[-n+1, n-1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwapCode {
    u: Word,
    w: Word,
}

impl SwapCode {
    /// Requires the correlation hypotheses (presentation-independent).
    pub fn new(u: Word, w: Word) -> Result<Self> {
        let reasons = correlation_failures(&u, &w)?;
        if !reasons.is_empty() {
            return Err(Error::Invalid(reasons.join("; ")));
        }
        Ok(Self { u, w })
    }

    pub fn u(&self) -> &Word {
        &self.u
    }

    pub fn w(&self) -> &Word {
        &self.w
    }

    pub fn radius(&self) -> usize {
        self.u.len() - 1
    }

    /// Every value `Φ` could take on the window; more than one distinct
    /// value means the rule is ambiguous there.
    pub fn candidates(&self, window: &[Option<Symbol>]) -> Vec<Symbol> {
        let n = self.u.len();
        assert_eq!(window.len(), 2 * n - 1, "window must have length 2n - 1");
        let mut out = Vec::new();
        for i in 1..=n {
            let block = &window[n - i..2 * n - i];
            let matches = |p: &Word| block.iter().zip(p.symbols()).all(|(x, s)| *x == Some(*s));
            if matches(&self.w) {
                out.push(self.u.symbols()[i - 1]);
            }
            if matches(&self.u) {
                out.push(self.w.symbols()[i - 1]);
            }
        }
        if out.is_empty() {
            out.extend(window[n - 1]);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn phi(&self, window: &[Option<Symbol>]) -> Symbol {
        self.candidates(window)[0]
    }

    /// Applies the code to a finite word (padded convention).
    pub fn apply(&self, x: &Word) -> Word {
        let r = self.radius();
        let padded: Vec<Option<Symbol>> = std::iter::repeat_n(None, r)
            .chain(x.symbols().iter().map(|&s| Some(s)))
            .chain(std::iter::repeat_n(None, r))
            .collect();
        Word::new((0..x.len()).map(|i| self.phi(&padded[i..i + 2 * r + 1])).collect())
    }

    /// Applies the code to the periodic point `x^∞`, returning one period.
    pub fn apply_periodic(&self, period: &Word) -> Word {
        let r = self.radius();
        let p = period.len();
        let at = |i: isize| Some(period.symbols()[i.rem_euclid(p as isize) as usize]);
        let out = (0..p as isize)
            .map(|i| {
                let window: Vec<Option<Symbol>> = (i - r as isize..=i + r as isize).map(at).collect();
                self.phi(&window)
            })
            .collect();
        Word::new(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjugacyReport {
    pub admissibility: Admissibility,
    pub n_max: usize,
    /// `#L_j(X_u)` and whether the swap maps it bijectively onto `L_j(X_w)`.
    pub levels: Vec<LevelCheck>,
    pub bijective: bool,
    pub entropy_u: f64,
    pub entropy_w: f64,
    pub entropies_agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelCheck {
    pub len: usize,
    pub count_u: usize,
    pub count_w: usize,
    pub bijective: bool,
    /// A word of `L_j(X_u)` whose image is outside `L_j(X_w)` or collides.
    pub witness: Option<(Word, Word)>,
}

pub const ENTROPY_TOL: f64 = 1e-9;

/// Checks the swap code level by level up to `n_max` and compares entropies.
pub fn verify_conjugacy(g: &LabeledGraph, u: &Word, w: &Word, n_max: usize, opts: EngineOptions) -> Result<ConjugacyReport> {
    let admissibility = swap_admissible(g, u, w)?;
    if !admissibility.admissible {
        return Err(Error::Invalid(format!("swap not admissible: {}", admissibility.reasons.join("; "))));
    }
    let code = SwapCode::new(u.clone(), w.clone())?;
    let xu = LanguageAutomaton::new(g, std::slice::from_ref(u));
    let xw = LanguageAutomaton::new(g, std::slice::from_ref(w));
    let mut levels = Vec::new();
    for len in 1..=n_max {
        let words = xu.words(len);
        let count_w = xw.words(len).len();
        let mut seen = HashSet::new();
        let mut witness = None;
        for v in &words {
            let image = code.apply(v);
            if !xw.accepts(&image) || !seen.insert(image.clone()) {
                witness = Some((v.clone(), image));
                break;
            }
        }
        let bijective = witness.is_none() && words.len() == count_w;
        levels.push(LevelCheck { len, count_u: words.len(), count_w, bijective, witness });
    }
    let entropy = |x: &Word| -> Result<f64> { Ok(sofic_perturb_set(g, &ForbiddenSet::new([x.clone()])?, opts)?.result.entropy) };
    let (entropy_u, entropy_w) = (entropy(u)?, entropy(w)?);
    let entropies_agree = entropy_u == entropy_w || (entropy_u - entropy_w).abs() <= ENTROPY_TOL;
    Ok(ConjugacyReport {
        admissibility,
        n_max,
        bijective: levels.iter().all(|l| l.bijective),
        levels,
        entropy_u,
        entropy_w,
        entropies_agree,
    })
}

/// Windows of length `2n - 1` over `alphabet` on which `Φ` is ambiguous.
pub fn ambiguous_windows(code: &SwapCode, alphabet: u32) -> Vec<Word> {
    crate::word::Alphabet::new(alphabet)
        .map(|a| a.words(2 * code.u.len() - 1))
        .unwrap_or_default()
        .into_iter()
        .filter(|x| {
            let window: Vec<Option<Symbol>> = x.symbols().iter().map(|&s| Some(s)).collect();
            code.candidates(&window).len() > 1
        })
        .collect()
}
