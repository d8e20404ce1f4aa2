use std::collections::{BTreeSet, HashMap};

use crate::automata::{core_vertices, perron_root, DirectedGraph, LabeledGraph, LanguageAutomaton};
use crate::error::{Error, Result};
use crate::poly::{cofactor, largest_real_pole, largest_real_root, polymatrix_bilinear, Polynomial, RationalFunction};
use crate::word::{autocorrelation, Symbol, Word};

use super::{normalize, overlap_polynomial, EngineOptions, ForbiddenSet, OracleCheck, PerturbationResult};

pub(super) fn ambient_lambda(g: &DirectedGraph, tol: f64) -> f64 {
    perron_root(g, tol).unwrap_or_else(|_| LanguageAutomaton::new(&LabeledGraph::edge_shift(g), &[]).growth().value)
}

fn check_walk(g: &DirectedGraph, walk: &[usize]) -> Result<Word> {
    if walk.is_empty() || !g.is_walk(walk) {
        return Err(Error::NotAllowed(format!("{walk:?} is not a walk")));
    }
    Ok(Word::new(walk.iter().map(|&e| e as Symbol).collect()))
}

/// `det(zI - A) c_w(z) + adj(zI - A)_{r(w), s(w)}`.
///
/// The adjugate entry `(r, s)` is the cofactor of row `s`, column `r`.
pub fn single_word_characteristic(g: &DirectedGraph, walk: &[usize]) -> Result<Polynomial> {
    let word = check_walk(g, walk)?;
    let m = g.char_matrix();
    let s = g.source(walk[0]);
    let r = g.target(*walk.last().unwrap());
    let c = autocorrelation(&word).polynomial();
    Ok(&(&g.char_poly() * &c) + &cofactor(&m, s, r))
}

/// Largest real zero of the single-word characteristic polynomial.
pub fn sft_entropy_single(g: &DirectedGraph, walk: &[usize], opts: EngineOptions) -> Result<PerturbationResult> {
    let word = check_walk(g, walk)?;
    let la = LanguageAutomaton::new(&LabeledGraph::edge_shift(g), std::slice::from_ref(&word));
    let ambient = ambient_lambda(g, opts.tol);
    let n = opts.horizon();
    if la.is_empty() {
        return Ok(PerturbationResult::empty("sft-single", ambient, &la, n));
    }
    let p = single_word_characteristic(g, walk)?;
    let bound = (g.max_row_sum() as f64).max(1.0);
    let lambda = largest_real_root(&p, 0.0, bound, opts.tol)?.unwrap_or(1.0).max(1.0);
    let mut r = PerturbationResult::new("sft-single", lambda, ambient, OracleCheck::new(&la, n, lambda));
    if !crate::automata::is_irreducible(g) {
        r.notes.push("adjacency matrix is reducible; formula evaluated anyway".into());
    }
    r.characteristic = Some(p);
    Ok(r)
}

/// Walks of length `len` avoiding `forbidden`, depth first.
fn avoiding_walks(g: &DirectedGraph, forbidden: &[Word], len: usize) -> Vec<Vec<usize>> {
    let out = g.out_edges();
    let mut result = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..g.edges().len()).map(|e| vec![e]).collect();
    stack.reverse();
    while let Some(walk) = stack.pop() {
        let syms: Vec<Symbol> = walk.iter().map(|&e| e as Symbol).collect();
        if forbidden.iter().any(|f| syms.ends_with(f.symbols())) {
            continue;
        }
        if walk.len() == len {
            result.push(walk);
            continue;
        }
        for &e in out[g.target(*walk.last().unwrap())].iter().rev() {
            let mut next = walk.clone();
            next.push(e);
            stack.push(next);
        }
    }
    result
}

/// Adds to `K` the minimal walks that avoid `K` but occur in no point of
/// `X_K`, so that counting `K`-avoiding walks counts `L_n(X_K)` exactly.
///
/// With `L = max(longest - 1, 1)`, `X_K` is the set of biinfinite paths in
/// the graph whose states are `K`-avoiding walks of length `L`; a walk of
/// length at most `L` is in `L(X_K)` iff it is a subwalk of a state lying
/// between cycles.
pub fn essentialize(g: &DirectedGraph, forbidden: &[Word]) -> Vec<Word> {
    let longest = forbidden.iter().map(|w| w.len()).max().unwrap_or(1);
    let l = longest.saturating_sub(1).max(1);
    let states = avoiding_walks(g, forbidden, l);
    let index: HashMap<&[usize], usize> = states.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let out = g.out_edges();
    let succ: Vec<Vec<usize>> = states
        .iter()
        .map(|s| {
            out[g.target(*s.last().unwrap())]
                .iter()
                .filter_map(|&e| {
                    let mut ext: Vec<Symbol> = s.iter().map(|&x| x as Symbol).collect();
                    ext.push(e as Symbol);
                    if forbidden.iter().any(|f| ext.ends_with(f.symbols())) {
                        return None;
                    }
                    let mut t = s[1..].to_vec();
                    t.push(e);
                    index.get(t.as_slice()).copied()
                })
                .collect()
        })
        .collect();
    let core = core_vertices(&succ);
    let mut good: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (s, _) in states.iter().zip(&core).filter(|(_, &c)| c) {
        for i in 0..s.len() {
            for j in i + 1..=s.len() {
                good.insert(s[i..j].to_vec());
            }
        }
    }
    let mut extra = Vec::new();
    for len in 1..=l {
        for walk in avoiding_walks(g, forbidden, len) {
            if !good.contains(&walk) {
                extra.push(Word::new(walk.iter().map(|&e| e as Symbol).collect()));
            }
        }
    }
    if extra.is_empty() {
        return forbidden.to_vec();
    }
    ForbiddenSet::new(forbidden.iter().cloned().chain(extra))
        .expect("nonempty words")
        .words()
        .to_vec()
}

/// Generating function of `#L_n(X_K)` for an edge shift and forbidden
/// walks `K`, from the block system
///
/// ```text
/// [ zI - Aᵀ   R  ] [F_v]   [1]
/// [   S     -zM  ] [G_w] = [0]
/// ```
///
/// with `R_{i,w} = z·[i = r(w)]`, `S_{w,j} = [j = s(w)]` and
/// `M_{w,u} = (u, w)_z`. Here `F_v` counts words ending at vertex `v`
/// (each vertex contributes one empty walk) and `G_w` counts words whose
/// only forbidden occurrence is `w` at the end. The counting series is
/// `F = z · Σ_v F_v - (N - 1)`.
pub fn sft_multi_gf(g: &DirectedGraph, walks: &[Vec<usize>], opts: EngineOptions) -> Result<PerturbationResult> {
    let words = walks.iter().map(|w| check_walk(g, w)).collect::<Result<Vec<_>>>()?;
    let k = ForbiddenSet::new(words)?;
    let n = opts.horizon();
    let la = LanguageAutomaton::new(&LabeledGraph::edge_shift(g), k.words());
    let ambient = ambient_lambda(g, opts.tol);
    if la.is_empty() {
        return Ok(PerturbationResult::empty("sft-multi", ambient, &la, n));
    }
    let kk = essentialize(g, k.words());
    let nv = g.vertices();
    let size = nv + kk.len();
    let a = g.adjacency();
    let z = Polynomial::z();
    let mut p = vec![vec![RationalFunction::zero(); size]; size];
    for i in 0..nv {
        for j in 0..nv {
            let mut e = Polynomial::from_i64(&[-(a[j][i] as i64)]);
            if i == j {
                e = &e + &z;
            }
            p[i][j] = e.into();
        }
    }
    for (wi, w) in kk.iter().enumerate() {
        let s = g.source(w.symbols()[0] as usize);
        let r = g.target(*w.symbols().last().unwrap() as usize);
        p[r][nv + wi] = z.clone().into();
        p[nv + wi][s] = RationalFunction::one();
        for (ui, u) in kk.iter().enumerate() {
            let m = overlap_polynomial(u.symbols(), w.symbols());
            p[nv + wi][nv + ui] = (-&(&z * &m)).into();
        }
    }
    let ones: Vec<RationalFunction> = (0..size)
        .map(|i| if i < nv { RationalFunction::one() } else { RationalFunction::zero() })
        .collect();
    let mut notes = Vec::new();
    if kk != k.words() {
        notes.push(format!("K replaced by {} words with the same avoiding shift", kk.len()));
    }
    let raw = match polymatrix_bilinear(&p, &ones, &ones) {
        Ok(raw) => raw,
        Err(Error::Singular) => {
            let lambda = la.growth().value;
            let mut r = PerturbationResult::new("sft-multi", lambda, ambient, OracleCheck::new(&la, n, lambda));
            r.notes.push("singular system; lambda taken from the oracle".into());
            return Ok(r);
        }
        Err(e) => return Err(e),
    };
    let counts = la.counts(n);
    let (j, f) = normalize(&raw, nv as i64 - 1, 1, &counts);
    let bound = (g.max_row_sum() as f64).max(1.0);
    let lambda = if bound > 1.0 {
        largest_real_pole(&f, 1.0, bound, opts.tol)?.unwrap_or(1.0)
    } else {
        1.0
    };
    let mut r = PerturbationResult::new("sft-multi", lambda, ambient, OracleCheck::new(&la, n, lambda));
    r.characteristic = Some(f.denom().clone());
    r.notes = notes;
    Ok(r.with_series(f, j))
}
