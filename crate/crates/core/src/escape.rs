//! Local escape rates into shrinking cylinder holes of a full shift.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perturbation::{sft_multi_gf, EngineOptions, ForbiddenSet};
use crate::poly::{invert_rational, largest_real_root, polymatrix_bilinear, rat, rational_to_f64, Polynomial, Rational, RationalFunction};
use crate::automata::DirectedGraph;
use crate::word::{correlate, Word};

/// `pre · period^∞` in canonical form: the period is primitive and the
/// preperiod is as short as possible.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pre: Word,
    period: Word,
}

impl Point {
    pub fn new(pre: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Invalid("period must be nonempty".into()));
        }
        let p = period.symbols();
        let prim = (1..=p.len())
            .find(|&d| p.len() % d == 0 && (0..p.len()).all(|i| p[i] == p[i % d]))
            .unwrap();
        let mut period = p[..prim].to_vec();
        let mut pre = pre.symbols().to_vec();
        while pre.last().is_some_and(|&s| s == *period.last().unwrap()) {
            pre.pop();
            period.rotate_right(1);
        }
        Ok(Self { pre: Word::new(pre), period: Word::new(period) })
    }

    pub fn preperiod(&self) -> &Word {
        &self.pre
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    /// Shift-periodic, i.e. the preperiod is empty.
    pub fn is_periodic(&self) -> bool {
        self.pre.is_empty()
    }

    /// Least period when periodic.
    pub fn least_period(&self) -> Option<usize> {
        self.is_periodic().then_some(self.period.len())
    }

    pub fn prefix(&self, n: usize) -> Word {
        let tail = self.period.symbols().iter().cycle();
        Word::new(self.pre.symbols().iter().chain(tail).take(n).copied().collect())
    }

    /// `S^m x`.
    pub fn shift(&self, m: usize) -> Point {
        if m <= self.pre.len() {
            return Point { pre: Word::new(self.pre.symbols()[m..].to_vec()), period: self.period.clone() };
        }
        let mut period = self.period.symbols().to_vec();
        let r = (m - self.pre.len()) % period.len();
        period.rotate_left(r);
        Point { pre: Word::new(Vec::new()), period: Word::new(period) }
    }

    fn max_symbol(&self) -> u32 {
        self.pre.symbols().iter().chain(self.period.symbols()).copied().max().unwrap_or(0)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})^inf", self.pre, self.period)
    }
}

/// Parses `pre(period)`, e.g. `0(1)` for `01^∞`; a bare word is periodic.
impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.find('(') {
            Some(i) if s.ends_with(')') => Point::new(s[..i].parse()?, s[i + 1..s.len() - 1].parse()?),
            None => Point::new(Word::new(Vec::new()), s.parse()?),
            _ => Err(Error::Parse(format!("bad point {s:?}; expected pre(period)"))),
        }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.pre.to_string(), self.period.to_string()).serialize(s)
    }
}

/// Least `m > 0` with `S^m x = y`.
pub fn point_relation(x: &Point, y: &Point) -> Option<usize> {
    (1..=x.pre.len() + x.period.len()).find(|&m| x.shift(m) == *y)
}

/// `lim z^{-n} (x_{[1,n]}, y_{[1,n]})_z` as a rational function of `z`.
pub fn alpha_entry(x: &Point, y: &Point) -> RationalFunction {
    let zinv = RationalFunction::z_pow(-1);
    let geometric = |s: usize| -> RationalFunction {
        let one = RationalFunction::one();
        one.div(&(&one - &RationalFunction::z_pow(-(s as i64)))).expect("nonzero")
    };
    if x == y {
        return match x.least_period() {
            None => zinv,
            Some(s) => &zinv * &geometric(s),
        };
    }
    let Some(m) = point_relation(x, y) else {
        return RationalFunction::zero();
    };
    let base = &zinv * &RationalFunction::z_pow(-(m as i64));
    match (x.least_period(), y.least_period()) {
        (Some(t), _) => &base * &geometric(t),
        (None, Some(s)) => &base * &geometric(s),
        (None, None) => base,
    }
}

/// Points `x_1, …, x_k` in the full `N`-shift; the holes are the cylinders
/// of their length-`n` prefixes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HoleFamily {
    pub symbols: u32,
    pub points: Vec<Point>,
}

impl HoleFamily {
    pub fn new(symbols: u32, points: Vec<Point>) -> Result<Self> {
        if symbols < 2 {
            return Err(Error::Invalid("need at least two symbols".into()));
        }
        if points.is_empty() {
            return Err(Error::Invalid("need at least one point".into()));
        }
        if let Some(p) = points.iter().find(|p| p.max_symbol() >= symbols) {
            return Err(Error::SymbolOutOfRange { symbol: p.max_symbol(), size: symbols });
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::Invalid(format!("point {p} repeated")));
            }
        }
        Ok(Self { symbols, points })
    }

    pub fn k(&self) -> usize {
        self.points.len()
    }

    /// `K_n`, or `None` while two prefixes still coincide.
    pub fn words(&self, n: usize) -> Option<Vec<Word>> {
        let words: Vec<Word> = self.points.iter().map(|p| p.prefix(n)).collect();
        let distinct = (0..words.len()).all(|i| !words[..i].contains(&words[i]));
        distinct.then_some(words)
    }
}

fn ser_rational<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    q.to_string().serialize(s)
}

fn ser_matrix<S: Serializer>(m: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    m.iter()
        .map(|r| r.iter().map(|q| q.to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .serialize(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalRate {
    /// `α(N)` with `α_{i,j}` the limit for the pair `(x_i, x_j)`.
    #[serde(serialize_with = "ser_matrix")]
    pub alpha: Vec<Vec<Rational>>,
    pub diagonally_dominant: bool,
    /// Sum of the entries of `α(N)⁻¹`.
    #[serde(serialize_with = "ser_rational")]
    pub t: Rational,
    /// `T / N`, the limit of `(ln N - ln λ_n) N^n`.
    #[serde(serialize_with = "ser_rational")]
    pub lambda: Rational,
    /// `T / (kN)`.
    #[serde(serialize_with = "ser_rational")]
    pub rho: Rational,
}

pub fn alpha_matrix(family: &HoleFamily) -> Vec<Vec<Rational>> {
    let z = rat(family.symbols as i64);
    family
        .points
        .iter()
        .map(|x| {
            family
                .points
                .iter()
                .map(|y| alpha_entry(x, y).eval(&z).expect("no pole at N > 1"))
                .collect()
        })
        .collect()
}

/// Exact local escape rate. The sum of the entries of `α⁻¹` does not
/// depend on whether `α` or its transpose is used.
pub fn local_rate(family: &HoleFamily) -> Result<LocalRate> {
    let alpha = alpha_matrix(family);
    let diagonally_dominant = alpha.iter().enumerate().all(|(i, row)| {
        let off: Rational = row.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q.abs()).sum();
        off < row[i]
    });
    let inv = invert_rational(&alpha)?;
    let t: Rational = inv.iter().flatten().sum();
    let n = rat(family.symbols as i64);
    let lambda = &t / &n;
    let rho = &lambda / rat(family.k() as i64);
    Ok(LocalRate { alpha, diagonally_dominant, t, lambda, rho })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaRow {
    pub n: usize,
    pub words: Vec<Word>,
    pub lambda_n: f64,
    /// `(ln N - ln λ_n) · N^n`.
    pub scaled_gap: f64,
}

/// `s_n(z)`: the sum of the entries of the inverse correlation matrix.
pub fn correlation_sum(words: &[Word]) -> Result<RationalFunction> {
    let m = words
        .iter()
        .map(|a| {
            words
                .iter()
                .map(|b| Ok(RationalFunction::from_poly(correlate(b, a)?.polynomial())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let ones = vec![RationalFunction::one(); words.len()];
    polymatrix_bilinear(&m, &ones, &ones)
}

/// `λ_n`, the largest zero of `z - N + s_n(z)`.
pub fn lambda_n(symbols: u32, words: &[Word], tol: f64) -> Result<f64> {
    let s = correlation_sum(words)?;
    let f = &RationalFunction::from_poly(Polynomial::from_i64(&[-(symbols as i64), 1])) + &s;
    let numer = f.numer();
    if numer.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(largest_real_root(numer, 0.0, symbols as f64, tol)?.unwrap_or(0.0))
}

pub fn lambda_sequence(family: &HoleFamily, range: std::ops::RangeInclusive<usize>, tol: f64) -> Result<Vec<LambdaRow>> {
    let n_sym = family.symbols as f64;
    let mut rows = Vec::new();
    for n in range {
        let Some(words) = family.words(n) else { continue };
        let lambda_n = lambda_n(family.symbols, &words, tol)?;
        let scaled_gap = (n_sym.ln() - lambda_n.ln()) * n_sym.powi(n as i32);
        rows.push(LambdaRow { n, words, lambda_n, scaled_gap });
    }
    Ok(rows)
}

/// `ρ(K) = ln N - h(X_K)`; infinite when `X_K` is empty.
pub fn escape_rate(symbols: u32, k: &[Word], opts: EngineOptions) -> Result<f64> {
    if k.is_empty() {
        return Ok(0.0);
    }
    let g = DirectedGraph::full_shift(symbols as u64);
    let walks: Vec<Vec<usize>> = ForbiddenSet::new(k.iter().cloned())?
        .words()
        .iter()
        .map(|w| w.symbols().iter().map(|&s| s as usize).collect())
        .collect();
    let r = sft_multi_gf(&g, &walks, opts)?;
    Ok((symbols as f64).ln() - r.entropy)
}

/// Exact decimal rendering helper for reports.
pub fn to_f64(q: &Rational) -> f64 {
    rational_to_f64(q)
}

/// `1 - N^{-s}`.
pub fn periodic_lambda(symbols: u32, s: usize) -> Rational {
    Rational::one() - Rational::one() / rat(symbols as i64).pow(s as i32)
}
