use crate::automata::{label_preimages, LanguageAutomaton};
use crate::error::{Error, Result};
use crate::poly::{largest_real_root, Polynomial, Rational, RationalFunction};
use crate::shifts::{dgap_presentation, gap_series, normalize_wtilde, sgap_allows, sgap_entropy, sgap_presentation, GapSet};
use crate::word::{autocorrelation, Word};

use super::{normalize, EngineOptions, OracleCheck, PerturbationResult};

/// Entropy and generating function of `X_S` with `w` forbidden.
///
/// With `c = c_w̃`, `T = T_S`, `f_w = (1 - T)c + T_{S_m}` and
///
/// ```text
/// F = z/(z-1) · (c (T_{S^c} + 1) - T_{S_m^c}) / f_w,
/// ```
///
/// obtained by solving the counting recurrences for words ending in 1,
/// in `S`-runs, in `S_m`-runs and in a first occurrence of `w̃`.
/// `λ` is the largest zero of the numerator of `f_w` in `(1, λ_S]`.
pub fn sgap_perturb_gf(s: &GapSet, w: &Word, opts: EngineOptions) -> Result<PerturbationResult> {
    if !sgap_allows(s, w) {
        return Err(Error::NotAllowed(w.to_string()));
    }
    let n = opts.horizon();
    let la = LanguageAutomaton::new(&sgap_presentation(s), std::slice::from_ref(w));
    let ambient = sgap_entropy(s, opts.tol)?;
    if la.is_empty() {
        return Ok(PerturbationResult::empty("sgap", ambient, &la, n));
    }
    if !w.symbols().contains(&1) {
        // Forbidding 0^n leaves the gaps below n.
        let s0 = s.below(w.len());
        let lambda = sgap_entropy(&s0, opts.tol)?;
        let mut r = PerturbationResult::new("sgap", lambda, ambient, OracleCheck::new(&la, n, lambda));
        let one_minus = &RationalFunction::one() - &gap_series(&s0);
        r.characteristic = Some(one_minus.numer().clone());
        r.notes.push(format!("w = 0^{}: X_w is the {} gap shift", w.len(), s0));
        return Ok(r);
    }
    let norm = normalize_wtilde(s, w)?;
    let m = norm.m.ok_or_else(|| {
        Error::Unsupported(format!("{w} starts and ends with 0 (w̃ = {})", norm.wtilde))
    })?;
    let c: RationalFunction = autocorrelation(&norm.wtilde).polynomial().into();
    let one = RationalFunction::one();
    let z = RationalFunction::z_pow(1);
    let t_s = gap_series(s);
    let sm = s.shift(m);
    let t_sc = gap_series(&s.complement());
    let t_sm = gap_series(&sm);
    let t_smc = gap_series(&sm.complement());
    let f_w = &(&(&one - &t_s) * &c) + &t_sm;
    let numer = &(&c * &(&t_sc + &one)) - &t_smc;
    let lead = z.div(&(&z - &one))?;
    let raw = &lead * &numer.div(&f_w)?;
    let counts = la.counts(n);
    let (j, f) = normalize(&raw, 0, 0, &counts);
    // Clearing the denominators of T_S and T_{S_m} keeps the factors that
    // cancel in f_w, so the zero at 1 stays visible.
    let den = lcm(t_s.denom(), t_sm.denom());
    let fw_poly = (&f_w * &RationalFunction::from_poly(den)).numer().clone();
    let lambda = largest_real_root(&fw_poly, 1.0, ambient.max(1.0 + opts.tol), opts.tol)?
        .filter(|&x| x > 1.0)
        .unwrap_or(1.0);
    let mut r = PerturbationResult::new("sgap", lambda, ambient, OracleCheck::new(&la, n, lambda));
    if let Some(pole) = crate::poly::largest_real_pole(&f, 1.0, 2.0, opts.tol)? {
        if (pole - lambda).abs() > 1e-9 {
            r.notes.push(format!("largest pole of F is {pole}, zero of f_w is {lambda}"));
        }
    }
    if norm.extended {
        r.notes.push(format!("w normalized to {} (m = {m})", norm.wtilde));
    }
    r.characteristic = Some(fw_poly);
    Ok(r.with_series(f, j))
}

fn lcm(a: &Polynomial, b: &Polynomial) -> Polynomial {
    (a * b).exact_div(&a.gcd(b)).monic()
}

/// `g_w = (z^d - z^{d-1} - 1) c_u + z^{d-1}` with `u` the preimage of `w̃`
/// on the d-gap presentation. For `w = 0^n`, `c_u = Σ_{i=1}^{k} z^{id-1}`
/// with `k = ⌈n/d⌉`, matching the gaps `{0, d, …, (k-1)d}` below `n`.
/// Returns the polynomial and the preimage walk when there is one.
pub fn dgap_characteristic(d: usize, w: &Word) -> Result<(Polynomial, Option<Vec<usize>>)> {
    let s = GapSet::multiples(d)?;
    if !sgap_allows(&s, w) {
        return Err(Error::NotAllowed(w.to_string()));
    }
    let mut base = vec![0i64; d + 1];
    base[d] += 1;
    base[d - 1] -= 1;
    base[0] -= 1;
    let base = Polynomial::from_i64(&base);
    let tail = Polynomial::monomial(Rational::from_integer(1.into()), d - 1);
    let (c, walk) = if !w.symbols().contains(&1) {
        let k = w.len().div_ceil(d);
        let mut coeffs = vec![0i64; k * d];
        for i in 1..=k {
            coeffs[i * d - 1] = 1;
        }
        (Polynomial::from_i64(&coeffs), None)
    } else {
        let wt = normalize_wtilde(&s, w)?.wtilde;
        let pre = label_preimages(&dgap_presentation(d)?, &wt);
        if pre.len() != 1 {
            return Err(Error::Invalid(format!("{wt} has {} preimages", pre.len())));
        }
        let u = Word::new(pre[0].iter().map(|&e| e as u32).collect());
        (autocorrelation(&u).polynomial(), Some(pre[0].clone()))
    };
    Ok((&(&base * &c) + &tail, walk))
}

/// Entropy of the d-gap shift with `w` forbidden.
pub fn dgap_perturb_entropy(d: usize, w: &Word, opts: EngineOptions) -> Result<PerturbationResult> {
    let (g, walk) = dgap_characteristic(d, w)?;
    let n = opts.horizon();
    let pres = dgap_presentation(d)?;
    let la = LanguageAutomaton::new(&pres, std::slice::from_ref(w));
    let ambient = sgap_entropy(&GapSet::multiples(d)?, opts.tol)?;
    if la.is_empty() {
        return Ok(PerturbationResult::empty("dgap", ambient, &la, n));
    }
    let lambda = largest_real_root(&g, 0.0, 2.0, opts.tol)?.unwrap_or(1.0).max(1.0);
    let mut r = PerturbationResult::new("dgap", lambda, ambient, OracleCheck::new(&la, n, lambda));
    if let Some(u) = walk {
        r.notes.push(format!("preimage walk {u:?}"));
    }
    r.characteristic = Some(g);
    Ok(r)
}
