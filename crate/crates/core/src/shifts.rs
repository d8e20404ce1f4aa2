//! Gap sets, S-gap and d-gap shifts.

use std::fmt;

use serde::Serialize;

use crate::automata::LabeledGraph;
use crate::error::{Error, Result};
use crate::poly::{largest_real_root, Rational, RationalFunction};
use crate::word::Word;

/// A set of gaps given by an eventually periodic characteristic sequence
/// `pre · period^∞`. Finite sets have the period `[false]`.
///
/// Values are kept canonical (shortest period, then shortest preperiod),
/// so equal sets compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GapSet {
    pre: Vec<bool>,
    period: Vec<bool>,
}

impl GapSet {
    pub fn new(pre: Vec<bool>, period: Vec<bool>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Parse("gap set period must be nonempty".into()));
        }
        let s = Self::canonical(pre, period);
        if s.is_empty() {
            return Err(Error::Invalid("gap set must be nonempty".into()));
        }
        Ok(s)
    }

    pub fn finite(elements: &[usize]) -> Result<Self> {
        let len = elements.iter().max().map_or(0, |m| m + 1);
        let mut pre = vec![false; len];
        for &s in elements {
            pre[s] = true;
        }
        Self::new(pre, vec![false])
    }

    /// `ℕ₀`.
    pub fn naturals() -> Self {
        Self::canonical(Vec::new(), vec![true])
    }

    /// `{0, d, 2d, ...}`.
    pub fn multiples(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Invalid("d must be at least 1".into()));
        }
        let mut period = vec![false; d];
        period[0] = true;
        Self::new(Vec::new(), period)
    }

    /// Parses bit strings such as `"0"` and `"10"`.
    pub fn from_bits(pre: &str, period: &str) -> Result<Self> {
        let bits = |s: &str| -> Result<Vec<bool>> {
            s.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::Parse(format!("bad bit {c:?} in gap set"))),
                })
                .collect()
        };
        Self::new(bits(pre)?, bits(period)?)
    }

    fn canonical(mut pre: Vec<bool>, mut period: Vec<bool>) -> Self {
        let q = period.len();
        if let Some(d) = (1..=q).find(|&d| q % d == 0 && (d..q).all(|i| period[i] == period[i - d])) {
            period.truncate(d);
        }
        // Absorb the tail of the preperiod into a rotated period.
        while let Some(&last) = pre.last() {
            if last != *period.last().unwrap() {
                break;
            }
            pre.pop();
            period.rotate_right(1);
        }
        Self { pre, period }
    }

    pub fn preperiod(&self) -> &[bool] {
        &self.pre
    }

    pub fn period(&self) -> &[bool] {
        &self.period
    }

    pub fn contains(&self, n: usize) -> bool {
        match n.checked_sub(self.pre.len()) {
            None => self.pre[n],
            Some(k) => self.period[k % self.period.len()],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.period.iter().all(|&b| !b)
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && self.pre.iter().all(|&b| !b)
    }

    /// Largest element of a finite set.
    pub fn max(&self) -> Option<usize> {
        if self.is_finite() {
            self.pre.iter().rposition(|&b| b)
        } else {
            None
        }
    }

    /// Elements below `bound`.
    pub fn elements_below(&self, bound: usize) -> Vec<usize> {
        (0..bound).filter(|&n| self.contains(n)).collect()
    }

    /// Smallest element that is at least `n`.
    pub fn next_at_least(&self, n: usize) -> Option<usize> {
        let horizon = n.max(self.pre.len()) + self.period.len();
        (n..horizon).find(|&k| self.contains(k))
    }

    pub fn complement(&self) -> GapSet {
        Self::canonical(
            self.pre.iter().map(|b| !b).collect(),
            self.period.iter().map(|b| !b).collect(),
        )
    }

    /// `S_m = {n - m : n ∈ S, n ≥ m}`.
    pub fn shift(&self, m: usize) -> GapSet {
        let q = self.period.len();
        let (pre, period) = if m <= self.pre.len() {
            (self.pre[m..].to_vec(), self.period.clone())
        } else {
            let r = (m - self.pre.len()) % q;
            let mut p = self.period.clone();
            p.rotate_left(r);
            (Vec::new(), p)
        };
        Self::canonical(pre, period)
    }

    /// `{s ∈ S : s < n}`.
    pub fn below(&self, n: usize) -> GapSet {
        let pre = (0..n).map(|k| self.contains(k)).collect();
        Self::canonical(pre, vec![false])
    }
}

impl fmt::Display for GapSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = |v: &[bool]| v.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
        if self.is_finite() {
            let els: Vec<String> = self.elements_below(self.pre.len()).iter().map(|s| s.to_string()).collect();
            write!(f, "{{{}}}", els.join(","))
        } else {
            write!(f, "{}({})^inf", bits(&self.pre), bits(&self.period))
        }
    }
}

/// `T_S(z) = Σ_{n∈S} z^{-(n+1)}` in closed form.
pub fn gap_series(s: &GapSet) -> RationalFunction {
    let p = s.pre.len() as i64;
    let mut total = RationalFunction::zero();
    for (n, &b) in s.pre.iter().enumerate() {
        if b {
            total = total + RationalFunction::z_pow(-(n as i64 + 1));
        }
    }
    if !s.is_finite() {
        let q = s.period.len() as i64;
        let mut block = RationalFunction::zero();
        for (j, &b) in s.period.iter().enumerate() {
            if b {
                block = block + RationalFunction::z_pow(-(p + j as i64 + 1));
            }
        }
        // Σ_k z^{-kq} = z^q / (z^q - 1)
        let zq = RationalFunction::z_pow(q);
        let geom = zq.div(&(&zq - &RationalFunction::one())).expect("z^q - 1 is nonzero");
        total = total + block * geom;
    }
    total
}

/// Truncated evaluation of `T_S(z)` for a predicate-defined set, with the
/// bound `z^{-M}/(z-1)` on the omitted tail. Diagnostic only.
pub fn gap_series_numeric(member: impl Fn(usize) -> bool, z: f64, terms: usize) -> (f64, f64) {
    let value = (0..terms).filter(|&n| member(n)).map(|n| z.powi(-(n as i32 + 1))).sum();
    (value, z.powi(-(terms as i32)) / (z - 1.0))
}

/// Largest real root of the numerator of `1 - T_S` on `(1, 2]`; `1` when
/// there is none (the shift has zero entropy).
pub fn sgap_entropy(s: &GapSet, tol: f64) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::Invalid("gap set must be nonempty".into()));
    }
    let f = &RationalFunction::one() - &gap_series(s);
    Ok(largest_real_root(f.numer(), 1.0, 2.0, tol)?.unwrap_or(1.0))
}

/// Whether a binary word occurs in `X_S`.
pub fn sgap_allows(s: &GapSet, w: &Word) -> bool {
    if w.symbols().iter().any(|&b| b > 1) {
        return false;
    }
    let ones: Vec<usize> = (0..w.len()).filter(|&i| w.symbols()[i] == 1).collect();
    let room = |run: usize| run == 0 || s.next_at_least(run).is_some();
    match (ones.first(), ones.last()) {
        (None, _) => s.next_at_least(w.len()).is_some(),
        (Some(&a), Some(&b)) => {
            room(a)
                && room(w.len() - 1 - b)
                && ones.windows(2).all(|p| s.contains(p[1] - p[0] - 1))
        }
        _ => unreachable!(),
    }
}

/// The completion `w̃` and the boundary run length `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Normalized {
    pub wtilde: Word,
    /// `None` when `w̃` starts and ends with 0.
    pub m: Option<usize>,
    /// The raw boundary run of `w` was not itself in `S ∪ {0}`.
    pub extended: bool,
}

/// Extends the boundary zero-runs of `w` to the least admissible lengths.
pub fn normalize_wtilde(s: &GapSet, w: &Word) -> Result<Normalized> {
    if !sgap_allows(s, w) {
        return Err(Error::NotAllowed(w.to_string()));
    }
    if !w.symbols().contains(&1) {
        return Err(Error::Unsupported(format!(
            "{w} has no 1; forbidding 0^n reduces to a finite gap set"
        )));
    }
    let lead = w.leading_run(0);
    let trail = w.trailing_run(0);
    let lift = |run: usize| if run == 0 { Some(0) } else { s.next_at_least(run) };
    let (k, k2) = (lift(lead).unwrap(), lift(trail).unwrap());
    let middle = &w.symbols()[lead..w.len() - trail];
    let mut sym = vec![0; k];
    sym.extend_from_slice(middle);
    sym.extend(std::iter::repeat(0).take(k2));
    let m = match (k, k2) {
        (0, 0) => Some(0),
        (k, 0) => Some(k),
        (0, k2) => Some(k2),
        _ => None,
    };
    Ok(Normalized { wtilde: Word::new(sym), m, extended: k != lead || k2 != trail })
}

/// Finite presentation of `X_S`: vertex `v_i` records the current zero run
/// (runs past the preperiod folded modulo the period), 0-edges advance the
/// run and 1-edges from `v_i`, `i ∈ S`, return to `v_0`.
pub fn sgap_presentation(s: &GapSet) -> LabeledGraph {
    let mut edges = Vec::new();
    let count = if s.is_finite() {
        s.max().expect("nonempty") + 1
    } else {
        s.pre.len() + s.period.len()
    };
    for i in 0..count {
        if s.contains(i) {
            edges.push((i, 0, 1));
        }
    }
    for i in 0..count {
        if i + 1 < count {
            edges.push((i, i + 1, 0));
        } else if !s.is_finite() {
            edges.push((i, s.pre.len(), 0));
        }
    }
    LabeledGraph::new(count, &edges).expect("valid edges").with_alphabet(2)
}

/// The d-gap presentation: a 0-labeled cycle `v_0 → … → v_{d-1} → v_0`
/// plus a 1-loop at `v_0`. The loop is edge 0 and the cycle edge from
/// `v_i` is edge `i + 1`.
pub fn dgap_presentation(d: usize) -> Result<LabeledGraph> {
    if d == 0 {
        return Err(Error::Invalid("d must be at least 1".into()));
    }
    let mut edges = vec![(0, 0, 1)];
    edges.extend((0..d).map(|i| (i, (i + 1) % d, 0)));
    LabeledGraph::new(d, &edges)
}

pub fn rational_gap_value(s: &GapSet, z: &Rational) -> Option<Rational> {
    gap_series(s).eval(z)
}
