//! Exact univariate polynomials and rational functions over the rationals,
//! power-series expansion in `1/z`, polynomial-matrix solves, and
//! isolation of largest real roots with Sturm sequences.
//!
//! Everything symbolic is exact. Floating point appears only at the
//! boundary of root refinement, where interval endpoints are converted.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub const DEFAULT_TOL: f64 = 1e-12;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fall back to a lossy route for huge numerators/denominators.
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Polynomial in `z` with rational coefficients stored in ascending order.
/// The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * z^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + rational_to_f64(c))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        self.scale(&(Rational::one() / l))
    }

    /// Euclidean division over the rationals.
    pub fn div_rem(&self, d: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        let dl = d.lead();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Polynomial::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &dl;
            if !c.is_zero() {
                for (i, di) in d.coeffs.iter().enumerate() {
                    r[k + i] -= &c * di;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Polynomial::from_coeffs(q), Polynomial::from_coeffs(r))
    }

    /// Division that must leave no remainder.
    pub fn exact_div(&self, d: &Polynomial) -> Polynomial {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors (roots made simple).
    pub fn square_free(&self) -> Polynomial {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g)
    }

    /// Positive rational multiple with coprime integer coefficients.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        Polynomial::from_coeffs(
            ints.into_iter()
                .map(|c| Rational::from_integer(c / &g))
                .collect(),
        )
    }

    /// Coefficients as exact strings (`"3"`, `"-1/2"`), ascending degree.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeff_strings().serialize(s)
    }
}

fn add_coeffs(a: &[Rational], b: &[Rational], sign: i64) -> Vec<Rational> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
            if sign > 0 {
                x + y
            } else {
                x - y
            }
        })
        .collect()
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        Polynomial::from_coeffs(add_coeffs(&self.coeffs, &o.coeffs, 1))
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        Polynomial::from_coeffs(add_coeffs(&self.coeffs, &o.coeffs, -1))
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::from_coeffs(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr for $ty {
            type Output = $ty;
            fn $m(self, o: $ty) -> $ty { (&self).$m(&o) }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $m(self, o: &$ty) -> $ty { (&self).$m(o) }
        }
    )*};
}

forward_owned!(Polynomial, Add add, Sub sub, Mul mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Quotient of polynomials kept in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Invalid("zero denominator".into()));
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self { num, den: Polynomial::one() };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num.exact_div(&g), den.exact_div(&g));
        let l = den.lead();
        if !l.is_one() {
            let inv = Rational::one() / l;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Self { num, den }
    }

    pub fn from_poly(p: Polynomial) -> Self {
        Self { num: p, den: Polynomial::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    /// `z^k` for any integer `k`.
    pub fn z_pow(k: i64) -> Self {
        if k >= 0 {
            Self::from_poly(Polynomial::monomial(Rational::one(), k as usize))
        } else {
            Self {
                num: Polynomial::one(),
                den: Polynomial::monomial(Rational::one(), (-k) as usize),
            }
        }
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Singular);
        }
        Ok(Self::reduced(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self * &o.inv()?)
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::reduced(self.num.scale(c), self.den.clone())
    }

    /// Degree of numerator minus degree of denominator (`None` for zero).
    pub fn order_at_infinity(&self) -> Option<i64> {
        self.num
            .degree()
            .map(|d| d as i64 - self.den.degree().unwrap_or(0) as i64)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Polynomial::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RationalFunction", 2)?;
        st.serialize_field("numerator", &self.num)?;
        st.serialize_field("denominator", &self.den)?;
        st.end()
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        if self.den == o.den {
            return RationalFunction::reduced(&self.num + &o.num, self.den.clone());
        }
        RationalFunction::reduced(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        self + &(-o)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::reduced(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

forward_owned!(RationalFunction, Add add, Sub sub, Mul mul);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self::from_poly(p)
    }
}

/// Prefix of the expansion `sum a_n z^{-n}` at infinity, together with the
/// principal part `sum_{j>0} b_j z^j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesPrefix {
    /// `coeffs[n] = a_n` for `n = 0..=K`.
    #[serde(serialize_with = "ser_rationals")]
    pub coeffs: Vec<Rational>,
    /// `principal[j-1] = b_j`.
    #[serde(serialize_with = "ser_rationals")]
    pub principal: Vec<Rational>,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().serialize(s)
}

impl SeriesPrefix {
    /// Coefficients as integers, if they all are.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }
}

/// Expands `r` in powers of `z^{-1}` up to `z^{-k}`.
pub fn series_expand(r: &RationalFunction, k: usize) -> SeriesPrefix {
    if r.is_zero() {
        return SeriesPrefix { coeffs: vec![Rational::zero(); k + 1], principal: Vec::new() };
    }
    let a = r.num.degree().unwrap();
    let b = r.den.degree().unwrap_or(0);
    // With t = 1/z: r = t^{b-a} N(t)/D(t), N and D the reversed coefficient lists.
    let rev = |p: &Polynomial, d: usize| -> Vec<Rational> { (0..=d).map(|i| p.coeff(d - i)).collect() };
    let n_rev = rev(&r.num, a);
    let d_rev = rev(&r.den, b);
    let e = b as i64 - a as i64;
    let principal_len = if e < 0 { (-e) as usize } else { 0 };
    let need = (k as i64 - e).max(0) as usize + 1;
    let d0 = d_rev[0].clone();
    let mut p: Vec<Rational> = Vec::with_capacity(need);
    for i in 0..need {
        let mut acc = n_rev.get(i).cloned().unwrap_or_else(Rational::zero);
        for j in 1..=i.min(b) {
            acc -= &d_rev[j] * &p[i - j];
        }
        p.push(acc / &d0);
    }
    let at = |idx: i64| -> Rational {
        if idx < 0 {
            Rational::zero()
        } else {
            p.get(idx as usize).cloned().unwrap_or_else(Rational::zero)
        }
    };
    let coeffs = (0..=k as i64).map(|n| at(n - e)).collect();
    let principal = (1..=principal_len as i64).map(|j| at(-j - e)).collect();
    SeriesPrefix { coeffs, principal }
}

/// Sturm chain of a square-free polynomial, each member scaled to a
/// primitive integer polynomial by a positive factor.
pub fn sturm_sequence(p: &Polynomial) -> Vec<Polynomial> {
    let mut seq = vec![p.primitive(), p.derivative().primitive()];
    if seq[1].is_zero() {
        seq.pop();
        return seq;
    }
    loop {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push((-r).primitive());
    }
    seq
}

fn sign(q: &Rational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

fn sign_variations(seq: &[Polynomial], x: &Rational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in seq {
        let s = sign(&p.eval(x));
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots in `(lo, hi]`.
pub fn count_roots(seq: &[Polynomial], lo: &Rational, hi: &Rational) -> usize {
    sign_variations(seq, lo).saturating_sub(sign_variations(seq, hi))
}

/// Largest real root of `p` in `(lo, hi]`, to absolute accuracy `tol`.
///
/// Roots are isolated with a Sturm chain of the square-free part and then
/// refined by exact bisection. Integer roots and dyadic midpoints that hit
/// a root exactly are returned exactly.
pub fn largest_real_root(p: &Polynomial, lo: f64, hi: f64, tol: f64) -> Result<Option<f64>> {
    let Some(r) = largest_real_root_exact(p, &rational_from_f64(lo), &rational_from_f64(hi), tol)? else {
        return Ok(None);
    };
    let x = rational_to_f64(&r);
    if r.is_integer() {
        return Ok(Some(x));
    }
    Ok(Some(polish(&p.square_free(), x, tol)))
}

/// Newton steps on a simple root bracketed by `x ± tol`.
fn polish(p: &Polynomial, x: f64, tol: f64) -> f64 {
    let dp = p.derivative();
    let mut y = x;
    for _ in 0..4 {
        let d = dp.eval_f64(y);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let next = y - p.eval_f64(y) / d;
        if !next.is_finite() || (next - x).abs() > tol {
            break;
        }
        y = next;
    }
    y
}

pub fn largest_real_root_exact(
    p: &Polynomial,
    lo: &Rational,
    hi: &Rational,
    tol: f64,
) -> Result<Option<Rational>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !(tol > 0.0) || lo >= hi {
        return Err(Error::Invalid("need lo < hi and tol > 0".into()));
    }
    let sf = p.square_free();
    if sf.degree().unwrap_or(0) == 0 {
        return Ok(None);
    }
    let seq = sturm_sequence(&sf);
    if count_roots(&seq, lo, hi) == 0 {
        return Ok(None);
    }
    // Integer roots are common (z = 1, z = N) and deserve an exact answer.
    let mut k = hi.floor();
    while &k > lo {
        if sf.eval(&k).is_zero() && count_roots(&seq, &k, hi) == 0 {
            return Ok(Some(k));
        }
        if count_roots(&seq, &k, hi) > 0 {
            break;
        }
        k -= Rational::one();
    }
    let tol_q = rational_from_f64(tol);
    let two = rat(2);
    let (mut a, mut b) = (lo.clone(), hi.clone());
    while &b - &a > tol_q {
        let mid = (&a + &b) / &two;
        let above = count_roots(&seq, &mid, &b);
        if above == 0 && sf.eval(&mid).is_zero() {
            return Ok(Some(mid));
        }
        if above >= 1 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Some((a + b) / two))
}

/// Largest real pole of `r` in `(lo, hi]`. The function is kept in lowest
/// terms, so removable singularities never show up as poles.
pub fn largest_real_pole(r: &RationalFunction, lo: f64, hi: f64, tol: f64) -> Result<Option<f64>> {
    if r.is_zero() || r.den.degree().unwrap_or(0) == 0 {
        return Ok(None);
    }
    largest_real_root(&r.den, lo, hi, tol)
}

/// Matrix of rational functions, row-major.
pub type PolyMatrix = Vec<Vec<RationalFunction>>;

fn check_square(m: &[Vec<RationalFunction>]) -> Result<usize> {
    let n = m.len();
    if n == 0 || m.iter().any(|row| row.len() != n) {
        return Err(Error::Invalid("matrix must be square and nonempty".into()));
    }
    Ok(n)
}

/// Fraction-free (Bareiss) determinant of a polynomial matrix.
pub fn bareiss_determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    let mut a: Vec<Vec<Polynomial>> = m.to_vec();
    let mut prev = Polynomial::one();
    let mut negate = false;
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return Polynomial::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = t.exact_div(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Rows rescaled by the lcm of their denominators; returns the polynomial
/// rows and the scaling factors.
fn clear_rows(
    m: &[Vec<RationalFunction>],
    b: Option<&[RationalFunction]>,
) -> (Vec<Vec<Polynomial>>, Vec<Polynomial>, Vec<Polynomial>) {
    let mut rows = Vec::with_capacity(m.len());
    let mut rhs = Vec::with_capacity(m.len());
    let mut scales = Vec::with_capacity(m.len());
    for (i, row) in m.iter().enumerate() {
        let mut l = Polynomial::one();
        let extra = b.map(|b| &b[i]);
        for e in row.iter().chain(extra) {
            let g = l.gcd(&e.den);
            l = (&l * &e.den).exact_div(&g).monic();
        }
        rows.push(row.iter().map(|e| (&e.num * &l).exact_div(&e.den)).collect());
        if let Some(bi) = extra {
            rhs.push((&bi.num * &l).exact_div(&bi.den));
        }
        scales.push(l);
    }
    (rows, rhs, scales)
}

/// Determinant of a matrix of rational functions.
pub fn determinant(m: &[Vec<RationalFunction>]) -> Result<RationalFunction> {
    check_square(m)?;
    let (rows, _, scales) = clear_rows(m, None);
    let d = bareiss_determinant(&rows);
    let s = scales.iter().fold(Polynomial::one(), |acc, p| &acc * p);
    RationalFunction::new(d, s)
}

/// Solution of `P x = b` together with `det(P)`.
#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub x: Vec<RationalFunction>,
    pub det: RationalFunction,
}

/// Solves `P x = b` by Cramer's rule over fraction-free determinants.
pub fn polymatrix_solve(m: &[Vec<RationalFunction>], b: &[RationalFunction]) -> Result<LinearSolution> {
    let n = check_square(m)?;
    if b.len() != n {
        return Err(Error::Invalid("right-hand side has the wrong length".into()));
    }
    let (rows, rhs, scales) = clear_rows(m, Some(b));
    let d = bareiss_determinant(&rows);
    if d.is_zero() {
        return Err(Error::Singular);
    }
    let x = (0..n)
        .map(|j| {
            let mut mj = rows.clone();
            for (i, row) in mj.iter_mut().enumerate() {
                row[j] = rhs[i].clone();
            }
            RationalFunction::new(bareiss_determinant(&mj), d.clone()).expect("nonzero det")
        })
        .collect();
    let s = scales.iter().fold(Polynomial::one(), |acc, p| &acc * p);
    Ok(LinearSolution { x, det: RationalFunction::new(d, s)? })
}

/// First column of `P^{-1}`, plus `det(P)`.
pub fn polymatrix_solve_first_column(m: &[Vec<RationalFunction>]) -> Result<LinearSolution> {
    let n = check_square(m)?;
    let mut e1 = vec![RationalFunction::zero(); n];
    e1[0] = RationalFunction::one();
    polymatrix_solve(m, &e1)
}

/// Cofactor `(-1)^{i+j} det(M without row i and column j)`.
pub fn cofactor(m: &[Vec<Polynomial>], i: usize, j: usize) -> Polynomial {
    let minor: Vec<Vec<Polynomial>> = m
        .iter()
        .enumerate()
        .filter(|&(r, _)| r != i)
        .map(|(_, row)| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, e)| e.clone()).collect())
        .collect();
    let d = if minor.is_empty() { Polynomial::one() } else { bareiss_determinant(&minor) };
    if (i + j) % 2 == 1 {
        -d
    } else {
        d
    }
}

/// `cᵀ P⁻¹ b`, from the bordered determinant
/// `det [[P, b], [cᵀ, 0]] = -det(P) · cᵀ P⁻¹ b`.
pub fn polymatrix_bilinear(
    m: &[Vec<RationalFunction>],
    b: &[RationalFunction],
    c: &[RationalFunction],
) -> Result<RationalFunction> {
    let n = check_square(m)?;
    if b.len() != n || c.len() != n {
        return Err(Error::Invalid("vector has the wrong length".into()));
    }
    let (mut rows, rhs, _) = clear_rows(m, Some(b));
    let d = bareiss_determinant(&rows);
    if d.is_zero() {
        return Err(Error::Singular);
    }
    let (crow, _, cscale) = clear_rows(&[c.to_vec()], None);
    for (row, bi) in rows.iter_mut().zip(rhs) {
        row.push(bi);
    }
    let mut last = crow.into_iter().next().unwrap();
    last.push(Polynomial::zero());
    rows.push(last);
    let bordered = bareiss_determinant(&rows);
    RationalFunction::new(-bordered, &d * &cscale[0])
}

/// Exact inverse of a rational matrix by Gauss-Jordan elimination.
pub fn invert_rational(m: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid("matrix must be square and nonempty".into()));
    }
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero()).ok_or(Error::Singular)?;
        a.swap(p, k);
        let inv = Rational::one() / &a[k][k];
        for v in a[k].iter_mut() {
            *v *= &inv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in 0..2 * n {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn f64_to_rational_checked(x: f64) -> Result<Rational> {
    Rational::from_f64(x).ok_or_else(|| Error::Invalid(format!("non-finite value {x}")))
}
