//! Finite graphs, labeled presentations and the language-counting oracle.
//!
//! The oracle never uses closed forms: it determinizes a presentation,
//! intersects with an Aho-Corasick automaton for the forbidden words, keeps
//! the states that sit between cycles (so every counted word extends to a
//! biinfinite point) and counts paths exactly.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{bareiss_determinant, largest_real_root, Polynomial};
use crate::word::{Symbol, Word};

/// Directed multigraph with an explicit edge order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectedGraph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl DirectedGraph {
    /// Edges are numbered row-major, repeated according to multiplicity.
    pub fn from_adjacency(adj: &[Vec<u64>]) -> Result<Self> {
        let r = adj.len();
        if adj.iter().any(|row| row.len() != r) {
            return Err(Error::Parse("adjacency matrix must be square".into()));
        }
        let mut edges = Vec::new();
        for (i, row) in adj.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                for _ in 0..m {
                    edges.push((i, j));
                }
            }
        }
        Ok(Self { vertices: r, edges })
    }

    pub fn from_edges(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(s, t)) = edges.iter().find(|&&(s, t)| s >= vertices || t >= vertices) {
            return Err(Error::Parse(format!("edge {s}->{t} leaves a graph with {vertices} vertices")));
        }
        Ok(Self { vertices, edges })
    }

    /// One vertex with `n` loops.
    pub fn full_shift(n: u64) -> Self {
        Self::from_adjacency(&[vec![n]]).unwrap()
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn source(&self, e: usize) -> usize {
        self.edges[e].0
    }

    pub fn target(&self, e: usize) -> usize {
        self.edges[e].1
    }

    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        let mut a = vec![vec![0u64; self.vertices]; self.vertices];
        for &(s, t) in &self.edges {
            a[s][t] += 1;
        }
        a
    }

    pub fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices];
        for (e, &(s, _)) in self.edges.iter().enumerate() {
            out[s].push(e);
        }
        out
    }

    fn successors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices];
        for &(s, t) in &self.edges {
            out[s].push(t);
        }
        out
    }

    pub fn max_row_sum(&self) -> u64 {
        self.adjacency().iter().map(|r| r.iter().sum::<u64>()).max().unwrap_or(0)
    }

    /// `zI - A` as a polynomial matrix.
    pub fn char_matrix(&self) -> Vec<Vec<Polynomial>> {
        let a = self.adjacency();
        (0..self.vertices)
            .map(|i| {
                (0..self.vertices)
                    .map(|j| {
                        let c = -(a[i][j] as i64);
                        if i == j {
                            Polynomial::from_i64(&[c, 1])
                        } else {
                            Polynomial::from_i64(&[c])
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `det(zI - A)`.
    pub fn char_poly(&self) -> Polynomial {
        if self.vertices == 0 {
            return Polynomial::one();
        }
        bareiss_determinant(&self.char_matrix())
    }

    /// Whether every edge sequence is a walk.
    pub fn is_walk(&self, walk: &[usize]) -> bool {
        walk.iter().all(|&e| e < self.edges.len())
            && walk.windows(2).all(|p| self.edges[p[0]].1 == self.edges[p[1]].0)
    }
}

/// Strongly connected with at least one edge.
pub fn is_irreducible(g: &DirectedGraph) -> bool {
    if g.vertices == 0 || g.edges.is_empty() {
        return false;
    }
    let comp = scc(&g.successors());
    comp.iter().all(|&c| c == comp[0])
}

/// Component id of every vertex (Kosaraju, iterative).
fn scc(succ: &[Vec<usize>]) -> Vec<usize> {
    let n = succ.len();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut stack = vec![(root, 0usize)];
        while let Some((v, i)) = stack.pop() {
            if i < succ[v].len() {
                stack.push((v, i + 1));
                let w = succ[v][i];
                if !seen[w] {
                    seen[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
            }
        }
    }
    let mut pred = vec![Vec::new(); n];
    for (v, ws) in succ.iter().enumerate() {
        for &w in ws {
            pred[w].push(v);
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for &root in order.iter().rev() {
        if comp[root] != usize::MAX {
            continue;
        }
        comp[root] = next;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &w in &pred[v] {
                if comp[w] == usize::MAX {
                    comp[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Vertices lying on some cycle.
fn cyclic_vertices(succ: &[Vec<usize>]) -> Vec<bool> {
    let comp = scc(succ);
    let mut size = HashMap::new();
    for &c in &comp {
        *size.entry(c).or_insert(0usize) += 1;
    }
    (0..succ.len())
        .map(|v| size[&comp[v]] > 1 || succ[v].contains(&v))
        .collect()
}

fn closure(adj: &[Vec<usize>], seeds: &[bool]) -> Vec<bool> {
    let mut mark = seeds.to_vec();
    let mut queue: VecDeque<usize> = (0..adj.len()).filter(|&v| seeds[v]).collect();
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !mark[w] {
                mark[w] = true;
                queue.push_back(w);
            }
        }
    }
    mark
}

/// Vertices reachable from a cycle and co-reachable to a cycle.
pub fn core_vertices(succ: &[Vec<usize>]) -> Vec<bool> {
    let cyc = cyclic_vertices(succ);
    let mut pred = vec![Vec::new(); succ.len()];
    for (v, ws) in succ.iter().enumerate() {
        for &w in ws {
            pred[w].push(v);
        }
    }
    let fwd = closure(succ, &cyc);
    let bwd = closure(&pred, &cyc);
    fwd.iter().zip(&bwd).map(|(a, b)| *a && *b).collect()
}

/// Spectral radius with a Collatz-Wielandt bracket.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralEstimate {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Spectral radius of a nonnegative integer matrix given by weighted
/// successor lists, as the maximum over strongly connected components of
/// a power iteration on `A + I`.
pub fn spectral_radius(rows: &[Vec<(usize, u64)>]) -> SpectralEstimate {
    let n = rows.len();
    let succ: Vec<Vec<usize>> = rows.iter().map(|r| r.iter().map(|&(j, _)| j).collect()).collect();
    let comp = scc(&succ);
    let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut members = vec![Vec::new(); ncomp];
    for v in 0..n {
        members[comp[v]].push(v);
    }
    let mut best = SpectralEstimate { value: 0.0, lower: 0.0, upper: 0.0 };
    for vs in members {
        let local: HashMap<usize, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let sub: Vec<Vec<(usize, f64)>> = vs
            .iter()
            .map(|&v| {
                rows[v]
                    .iter()
                    .filter_map(|&(w, m)| local.get(&w).map(|&j| (j, m as f64)))
                    .collect()
            })
            .collect();
        if sub.iter().all(|r| r.is_empty()) {
            continue;
        }
        let est = perron_power_iteration(&sub);
        if est.value > best.value {
            best = est;
        }
    }
    best
}

fn perron_power_iteration(a: &[Vec<(usize, f64)>]) -> SpectralEstimate {
    let n = a.len();
    let mut x = vec![1.0f64; n];
    let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
    for _ in 0..500_000 {
        let mut y = x.clone();
        for (i, row) in a.iter().enumerate() {
            for &(j, m) in row {
                y[i] += m * x[j];
            }
        }
        let ratios = y.iter().zip(&x).map(|(a, b)| a / b);
        let (l, h) = ratios.fold((f64::INFINITY, 0.0f64), |(l, h), r| (l.min(r), h.max(r)));
        lo = lo.max(l);
        hi = hi.min(h);
        let scale = y.iter().copied().fold(0.0, f64::max);
        x = y.into_iter().map(|v| v / scale).collect();
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    SpectralEstimate { value: (lo + hi) / 2.0 - 1.0, lower: lo - 1.0, upper: hi - 1.0 }
}

fn weighted_rows(g: &DirectedGraph) -> Vec<Vec<(usize, u64)>> {
    g.adjacency()
        .into_iter()
        .map(|row| row.into_iter().enumerate().filter(|&(_, m)| m > 0).collect())
        .collect()
}

/// Perron root from the characteristic polynomial, confirmed by power
/// iteration.
pub fn perron_root(g: &DirectedGraph, tol: f64) -> Result<f64> {
    let bound = g.max_row_sum() as f64;
    let root = if bound > 0.0 {
        largest_real_root(&g.char_poly(), 0.0, bound, tol)?
    } else {
        None
    };
    let est = spectral_radius(&weighted_rows(g));
    match root {
        None => {
            if est.upper > 1e-9 {
                return Err(Error::OracleDisagreement(format!(
                    "characteristic polynomial has no positive root but power iteration gives {}",
                    est.value
                )));
            }
            Err(Error::Nilpotent)
        }
        Some(r) => {
            if (r - est.value).abs() > 1e-6_f64.max(est.upper - est.lower) {
                return Err(Error::OracleDisagreement(format!(
                    "Perron root {r} vs power iteration {}",
                    est.value
                )));
            }
            Ok(r)
        }
    }
}

/// Labeled directed multigraph; edge `e` carries `labels[e]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabeledGraph {
    graph: DirectedGraph,
    labels: Vec<Symbol>,
    alphabet: u32,
}

impl LabeledGraph {
    /// Edges as `(source, target, label)` triples.
    pub fn new(vertices: usize, edges: &[(usize, usize, Symbol)]) -> Result<Self> {
        let graph = DirectedGraph::from_edges(vertices, edges.iter().map(|&(s, t, _)| (s, t)).collect())?;
        let labels: Vec<Symbol> = edges.iter().map(|e| e.2).collect();
        let alphabet = labels.iter().map(|&l| l + 1).max().unwrap_or(1);
        Ok(Self { graph, labels, alphabet })
    }

    /// Widens the alphabet (labels are unaffected).
    pub fn with_alphabet(mut self, size: u32) -> Self {
        self.alphabet = self.alphabet.max(size);
        self
    }

    /// The edge shift of `g`: each edge labeled by its own index.
    pub fn edge_shift(g: &DirectedGraph) -> Self {
        let labels = (0..g.edges.len() as Symbol).collect();
        Self { graph: g.clone(), labels, alphabet: (g.edges.len() as u32).max(1) }
    }

    /// One vertex, one loop per symbol.
    pub fn full_shift(n: u32) -> Self {
        Self::edge_shift(&DirectedGraph::full_shift(n as u64))
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    pub fn labels(&self) -> &[Symbol] {
        &self.labels
    }

    pub fn label(&self, e: usize) -> Symbol {
        self.labels[e]
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn vertices(&self) -> usize {
        self.graph.vertices
    }

    pub fn triples(&self) -> Vec<(usize, usize, Symbol)> {
        self.graph.edges.iter().zip(&self.labels).map(|(&(s, t), &l)| (s, t, l)).collect()
    }

    /// Distinct labels on the edges leaving each vertex.
    pub fn is_right_resolving(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.graph
            .edges
            .iter()
            .zip(&self.labels)
            .all(|(&(s, _), &l)| seen.insert((s, l)))
    }

    /// Every vertex has an incoming and an outgoing edge.
    pub fn is_essential(&self) -> bool {
        let mut inn = vec![false; self.vertices()];
        let mut out = vec![false; self.vertices()];
        for &(s, t) in &self.graph.edges {
            out[s] = true;
            inn[t] = true;
        }
        inn.iter().zip(&out).all(|(a, b)| *a && *b)
    }

    /// Restriction to the given vertices (renumbered in order).
    fn induced(&self, keep: &[bool]) -> LabeledGraph {
        let mut index = vec![usize::MAX; keep.len()];
        let mut next = 0;
        for (v, &k) in keep.iter().enumerate() {
            if k {
                index[v] = next;
                next += 1;
            }
        }
        let mut edges = Vec::new();
        let mut labels = Vec::new();
        for (&(s, t), &l) in self.graph.edges.iter().zip(&self.labels) {
            if keep[s] && keep[t] {
                edges.push((index[s], index[t]));
                labels.push(l);
            }
        }
        LabeledGraph { graph: DirectedGraph { vertices: next, edges }, labels, alphabet: self.alphabet }
    }

    /// Sub-presentation on the vertices between cycles. It presents the
    /// same shift space and is essential.
    pub fn core(&self) -> LabeledGraph {
        self.induced(&core_vertices(&self.graph.successors()))
    }

    /// Reads `w` from each vertex in `from`; returns the reachable set.
    fn step_set(&self, out: &[Vec<usize>], from: &BTreeSet<usize>, s: Symbol) -> BTreeSet<usize> {
        from.iter()
            .flat_map(|&v| out[v].iter())
            .filter(|&&e| self.labels[e] == s)
            .map(|&e| self.graph.edges[e].1)
            .collect()
    }
}

/// Deterministic automaton in which every state accepts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: u32,
    delta: Vec<Vec<Option<usize>>>,
    initial: usize,
}

impl Dfa {
    pub fn states(&self) -> usize {
        self.delta.len()
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn step(&self, q: usize, s: Symbol) -> Option<usize> {
        self.delta[q].get(s as usize).copied().flatten()
    }

    pub fn run(&self, q: usize, w: &[Symbol]) -> Option<usize> {
        w.iter().try_fold(q, |q, &s| self.step(q, s))
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.run(self.initial, w.symbols()).is_some()
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, Symbol, usize)> + '_ {
        self.delta.iter().enumerate().flat_map(|(q, row)| {
            row.iter().enumerate().filter_map(move |(s, t)| t.map(|t| (q, s as Symbol, t)))
        })
    }

    pub fn adjacency(&self) -> DirectedGraph {
        let edges = self.transitions().map(|(q, _, t)| (q, t)).collect();
        DirectedGraph { vertices: self.states(), edges }
    }

    pub fn to_labeled_graph(&self) -> LabeledGraph {
        let (edges, labels): (Vec<_>, Vec<_>) = self.transitions().map(|(q, s, t)| ((q, t), s)).unzip();
        LabeledGraph { graph: DirectedGraph { vertices: self.states(), edges }, labels, alphabet: self.alphabet }
    }

    /// Number of accepted words of each length `0..=n_max`.
    pub fn count_paths(&self, n_max: usize) -> Vec<BigUint> {
        let mut v = vec![BigUint::zero(); self.states()];
        v[self.initial] = BigUint::one();
        let mut out = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            out.push(v.iter().sum());
            if n == n_max {
                break;
            }
            let mut next = vec![BigUint::zero(); self.states()];
            for (q, _, t) in self.transitions() {
                if !v[q].is_zero() {
                    next[t] += &v[q];
                }
            }
            v = next;
        }
        out
    }

    /// Accepted words of length `n` in lexicographic order.
    pub fn words(&self, n: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut buf = Vec::with_capacity(n);
        self.collect_words(self.initial, n, &mut buf, &mut out);
        out
    }

    fn collect_words(&self, q: usize, n: usize, buf: &mut Vec<Symbol>, out: &mut Vec<Word>) {
        if buf.len() == n {
            out.push(Word::new(buf.clone()));
            return;
        }
        for s in 0..self.alphabet {
            if let Some(t) = self.step(q, s) {
                buf.push(s);
                self.collect_words(t, n, buf, out);
                buf.pop();
            }
        }
    }
}

/// Subset construction starting from `initial`; states are vertex sets
/// numbered in discovery order.
fn subset_construction(g: &LabeledGraph, initial: BTreeSet<usize>) -> (Dfa, Vec<BTreeSet<usize>>) {
    let out = g.graph.out_edges();
    let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
    let mut sets = vec![initial.clone()];
    index.insert(initial, 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < sets.len() {
        let mut row = vec![None; g.alphabet as usize];
        for s in 0..g.alphabet {
            let next = g.step_set(&out, &sets[i], s);
            if next.is_empty() {
                continue;
            }
            let id = *index.entry(next.clone()).or_insert_with(|| {
                sets.push(next);
                sets.len() - 1
            });
            row[s as usize] = Some(id);
        }
        delta.push(row);
        i += 1;
    }
    (Dfa { alphabet: g.alphabet, delta, initial: 0 }, sets)
}

/// Subset construction from the set of all vertices, trimmed to the states
/// that can still be extended forever (the initial state is always kept).
pub fn determinize(g: &LabeledGraph) -> Dfa {
    let (dfa, _) = subset_construction(g, (0..g.vertices()).collect());
    let succ: Vec<Vec<usize>> = dfa.delta.iter().map(|r| r.iter().flatten().copied().collect()).collect();
    let cyc = cyclic_vertices(&succ);
    let mut pred = vec![Vec::new(); succ.len()];
    for (v, ws) in succ.iter().enumerate() {
        for &w in ws {
            pred[w].push(v);
        }
    }
    let mut keep = closure(&pred, &cyc);
    keep[dfa.initial] = true;
    restrict_dfa(&dfa, &keep)
}

fn restrict_dfa(dfa: &Dfa, keep: &[bool]) -> Dfa {
    let mut index = vec![usize::MAX; keep.len()];
    let mut next = 0;
    for (q, &k) in keep.iter().enumerate() {
        if k {
            index[q] = next;
            next += 1;
        }
    }
    let delta = dfa
        .delta
        .iter()
        .enumerate()
        .filter(|&(q, _)| keep[q])
        .map(|(_, row)| row.iter().map(|t| t.filter(|&t| keep[t]).map(|t| index[t])).collect())
        .collect();
    Dfa { alphabet: dfa.alphabet, delta, initial: index[dfa.initial] }
}

/// Aho-Corasick automaton with a complete goto table.
#[derive(Clone, Debug)]
pub struct AhoCorasick {
    alphabet: u32,
    goto: Vec<Vec<usize>>,
    matched: Vec<bool>,
}

impl AhoCorasick {
    /// Patterns with symbols outside the alphabet can never match and are
    /// skipped.
    pub fn new(alphabet: u32, patterns: &[Word]) -> Self {
        let a = alphabet as usize;
        let mut trie: Vec<Vec<Option<usize>>> = vec![vec![None; a]];
        let mut matched = vec![false];
        for p in patterns {
            if p.symbols().iter().any(|&s| s >= alphabet) {
                continue;
            }
            let mut q = 0;
            for &s in p.symbols() {
                q = match trie[q][s as usize] {
                    Some(t) => t,
                    None => {
                        trie.push(vec![None; a]);
                        matched.push(false);
                        trie[q][s as usize] = Some(trie.len() - 1);
                        trie.len() - 1
                    }
                };
            }
            matched[q] = true;
        }
        let mut goto = vec![vec![0usize; a]; trie.len()];
        let mut fail = vec![0usize; trie.len()];
        let mut queue = VecDeque::new();
        for s in 0..a {
            if let Some(t) = trie[0][s] {
                goto[0][s] = t;
                queue.push_back(t);
            }
        }
        while let Some(q) = queue.pop_front() {
            matched[q] = matched[q] || matched[fail[q]];
            for s in 0..a {
                match trie[q][s] {
                    Some(t) => {
                        fail[t] = goto[fail[q]][s];
                        goto[q][s] = t;
                        queue.push_back(t);
                    }
                    None => goto[q][s] = goto[fail[q]][s],
                }
            }
        }
        Self { alphabet, goto, matched }
    }

    pub fn states(&self) -> usize {
        self.goto.len()
    }

    pub fn step(&self, q: usize, s: Symbol) -> usize {
        self.goto[q][s as usize]
    }

    pub fn is_match(&self, q: usize) -> bool {
        self.matched[q]
    }

    /// Whether any pattern occurs in `w`.
    pub fn finds(&self, w: &[Symbol]) -> bool {
        let mut q = 0;
        self.matched[0]
            || w.iter().any(|&s| {
                if s >= self.alphabet {
                    q = 0;
                    return false;
                }
                q = self.step(q, s);
                self.matched[q]
            })
    }
}

/// Exact description of `L(X_K)` for a presented shift `X` and forbidden
/// words `K`.
#[derive(Clone, Debug)]
pub struct LanguageAutomaton {
    core: LabeledGraph,
    dfa: Dfa,
}

impl LanguageAutomaton {
    pub fn new(g: &LabeledGraph, forbidden: &[Word]) -> Self {
        let alphabet = g.alphabet;
        if forbidden.iter().any(|w| w.is_empty()) {
            return Self::empty(alphabet);
        }
        let (d1, _) = subset_construction(g, (0..g.vertices()).collect());
        let ac = AhoCorasick::new(alphabet, forbidden);
        // Product of the determinized presentation with the pattern matcher.
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut states = vec![(d1.initial, 0usize)];
        index.insert((d1.initial, 0), 0);
        let mut edges = Vec::new();
        let mut labels = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let (q, a) = states[i];
            for s in 0..alphabet {
                let Some(q2) = d1.step(q, s) else { continue };
                let a2 = ac.step(a, s);
                if ac.is_match(a2) {
                    continue;
                }
                let id = *index.entry((q2, a2)).or_insert_with(|| {
                    states.push((q2, a2));
                    states.len() - 1
                });
                edges.push((i, id));
                labels.push(s);
            }
            i += 1;
        }
        let product = LabeledGraph { graph: DirectedGraph { vertices: states.len(), edges }, labels, alphabet };
        let core = product.core();
        if core.vertices() == 0 {
            return Self::empty(alphabet);
        }
        let (dfa, _) = subset_construction(&core, (0..core.vertices()).collect());
        Self { core, dfa }
    }

    fn empty(alphabet: u32) -> Self {
        let core = LabeledGraph { graph: DirectedGraph { vertices: 0, edges: Vec::new() }, labels: Vec::new(), alphabet };
        let dfa = Dfa { alphabet, delta: vec![vec![None; alphabet as usize]], initial: 0 };
        Self { core, dfa }
    }

    pub fn is_empty(&self) -> bool {
        self.core.vertices() == 0
    }

    /// Right-resolving essential presentation of `X_K`.
    pub fn presentation(&self) -> &LabeledGraph {
        &self.core
    }

    /// Deterministic acceptor of `L(X_K)`.
    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.dfa.accepts(w)
    }

    pub fn counts(&self, n_max: usize) -> Vec<BigUint> {
        self.dfa.count_paths(n_max)
    }

    pub fn words(&self, n: usize) -> Vec<Word> {
        self.dfa.words(n)
    }

    /// Growth rate of `#L_n(X_K)`; zero for an empty shift.
    pub fn growth(&self) -> SpectralEstimate {
        spectral_radius(&weighted_rows(&self.core.graph))
    }
}

/// `#L_n(X_K)` for `n = 0..=n_max`, `X` presented by `g`.
pub fn count_words(g: &LabeledGraph, forbidden: &[Word], n_max: usize) -> Vec<BigUint> {
    LanguageAutomaton::new(g, forbidden).counts(n_max)
}

/// Initial and terminal vertices of the walks labeled `w`.
pub fn word_endpoints(g: &LabeledGraph, w: &Word) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let out = g.graph.out_edges();
    let mut sources = BTreeSet::new();
    let mut ranges = BTreeSet::new();
    for v in 0..g.vertices() {
        let end = w
            .symbols()
            .iter()
            .fold(BTreeSet::from([v]), |set, &s| g.step_set(&out, &set, s));
        if !end.is_empty() {
            sources.insert(v);
            ranges.extend(end);
        }
    }
    (sources, ranges)
}

/// All walks labeled `w`, as edge-index sequences, in lexicographic order.
pub fn label_preimages(g: &LabeledGraph, w: &Word) -> Vec<Vec<usize>> {
    let out = g.graph.out_edges();
    let mut result = Vec::new();
    let mut buf = Vec::with_capacity(w.len());
    fn extend(
        g: &LabeledGraph,
        out: &[Vec<usize>],
        w: &[Symbol],
        v: usize,
        buf: &mut Vec<usize>,
        result: &mut Vec<Vec<usize>>,
    ) {
        if buf.len() == w.len() {
            result.push(buf.clone());
            return;
        }
        for &e in &out[v] {
            if g.labels[e] == w[buf.len()] {
                buf.push(e);
                extend(g, out, w, g.graph.edges[e].1, buf, result);
                buf.pop();
            }
        }
    }
    if w.is_empty() {
        return result;
    }
    for v in 0..g.vertices() {
        extend(g, &out, w.symbols(), v, &mut buf, &mut result);
    }
    result.sort();
    result
}

/// Right-resolving essential presentation of the same shift.
pub fn right_resolving_core(g: &LabeledGraph) -> LabeledGraph {
    let core = g.core();
    if core.is_right_resolving() {
        return core;
    }
    LanguageAutomaton::new(g, &[]).core
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn nums(v: &[BigUint]) -> Vec<u64> {
        v.iter().map(|x| x.try_into().unwrap()).collect()
    }

    fn even() -> LabeledGraph {
        LabeledGraph::new(2, &[(0, 0, 1), (0, 1, 0), (1, 0, 0)]).unwrap()
    }

    fn golden() -> DirectedGraph {
        DirectedGraph::from_adjacency(&[vec![1, 1], vec![1, 0]]).unwrap()
    }

    fn dgap4() -> DirectedGraph {
        DirectedGraph::from_adjacency(&[
            vec![1, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![1, 0, 0, 0],
        ])
        .unwrap()
    }

    /// Words of length n that sit in the middle of some allowed walk label
    /// of length n + 2 * pad, found by depth-first search over walks.
    fn brute_language(g: &LabeledGraph, forbidden: &[Word], n: usize, pad: usize) -> BTreeSet<Word> {
        fn dfs(
            g: &LabeledGraph,
            out: &[Vec<usize>],
            forbidden: &[Word],
            v: usize,
            label: &mut Vec<Symbol>,
            total: usize,
            keep: (usize, usize),
            acc: &mut BTreeSet<Word>,
        ) {
            if forbidden.iter().any(|f| label.ends_with(f.symbols())) {
                return;
            }
            if label.len() == total {
                acc.insert(Word::new(label[keep.0..keep.1].to_vec()));
                return;
            }
            for &e in &out[v] {
                label.push(g.label(e));
                dfs(g, out, forbidden, g.graph().target(e), label, total, keep, acc);
                label.pop();
            }
        }
        let out = g.graph().out_edges();
        let mut acc = BTreeSet::new();
        for v in 0..g.vertices() {
            dfs(g, &out, forbidden, v, &mut Vec::new(), n + 2 * pad, (pad, pad + n), &mut acc);
        }
        acc
    }

    fn all_walks(g: &LabeledGraph, n: usize) -> Vec<Vec<usize>> {
        let out = g.graph().out_edges();
        let mut walks: Vec<Vec<usize>> = if n == 0 { vec![vec![]] } else { (0..g.graph().edges().len()).map(|e| vec![e]).collect() };
        for _ in 1..n {
            walks = walks
                .into_iter()
                .flat_map(|p| {
                    let v = g.graph().target(*p.last().unwrap());
                    out[v].iter().map(move |&e| {
                        let mut q = p.clone();
                        q.push(e);
                        q
                    }).collect::<Vec<_>>()
                })
                .collect();
        }
        walks
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&golden()));
        assert!(is_irreducible(&dgap4()));
        let loops = DirectedGraph::from_adjacency(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(!is_irreducible(&loops));
        assert!(!is_irreducible(&DirectedGraph::from_adjacency(&[vec![0]]).unwrap()));
    }

    #[test]
    fn perron_fixtures() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert_eq!(perron_root(&DirectedGraph::full_shift(2), 1e-12).unwrap(), 2.0);
        assert!((perron_root(&golden(), 1e-12).unwrap() - phi).abs() < 1e-11);
        let nil = DirectedGraph::from_adjacency(&[vec![0, 1], vec![0, 0]]).unwrap();
        assert!(matches!(perron_root(&nil, 1e-12), Err(Error::Nilpotent)));
        // d = 4 gap matrix: largest root of z^4 - z^3 - 1.
        let r = perron_root(&dgap4(), 1e-12).unwrap();
        assert!((r.powi(4) - r.powi(3) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn determinize_fixtures() {
        // Three states: no 1 seen yet, even run since the last 1, odd run.
        let d = determinize(&even());
        assert_eq!(d.states(), 3);
        let single = LabeledGraph::new(1, &[(0, 0, 0)]).unwrap();
        assert_eq!(determinize(&single).states(), 1);
        let full = determinize(&LabeledGraph::full_shift(2));
        assert_eq!(full.states(), 1);
        assert_eq!(full.transitions().count(), 2);
    }

    #[test]
    fn determinize_preserves_language() {
        let fixtures = [even(), LabeledGraph::full_shift(2), LabeledGraph::new(3, &[(0, 1, 0), (1, 2, 1), (2, 0, 0), (0, 0, 1), (1, 0, 1)]).unwrap()];
        for g in &fixtures {
            let d = determinize(g);
            for n in 0..=10 {
                let walks: BTreeSet<Word> = all_walks(g, n)
                    .into_iter()
                    .map(|p| Word::new(p.iter().map(|&e| g.label(e)).collect()))
                    .collect();
                let accepted: BTreeSet<Word> = d.words(n).into_iter().collect();
                assert_eq!(walks, accepted, "n = {n}");
            }
        }
    }

    #[test]
    fn count_fixtures() {
        let full = LabeledGraph::full_shift(2);
        assert_eq!(nums(&count_words(&full, &[w("11")], 5)), vec![1, 2, 3, 5, 8, 13]);
        assert_eq!(nums(&count_words(&full, &[w("01"), w("10")], 4)), vec![1, 2, 2, 2, 2]);
        assert_eq!(nums(&count_words(&full, &[w("0"), w("1")], 4)), vec![1, 0, 0, 0, 0]);
        assert_eq!(nums(&count_words(&even(), &[w("1")], 4)), vec![1, 1, 1, 1, 1]);
        // Forbidding 10 leaves only 0^a 1^b words: n + 1 of each length.
        assert_eq!(nums(&count_words(&full, &[w("10")], 5)), vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn counts_require_biinfinite_extension() {
        // After 00, 11 and 01 are gone no biinfinite point remains.
        let full = LabeledGraph::full_shift(2);
        let c = count_words(&full, &[w("00"), w("11"), w("01")], 4);
        assert_eq!(nums(&c), vec![1, 0, 0, 0, 0]);
        // A dead end: vertex 1 has no way back.
        let g = LabeledGraph::new(2, &[(0, 0, 0), (0, 1, 1), (1, 1, 1)]).unwrap();
        assert_eq!(nums(&count_words(&g, &[], 3)), vec![1, 2, 3, 4]);
        let g = LabeledGraph::new(3, &[(0, 0, 0), (0, 1, 1), (1, 2, 1)]).unwrap();
        assert_eq!(nums(&count_words(&g, &[], 3)), vec![1, 1, 1, 1]);
    }

    #[test]
    fn oracle_matches_padded_brute_force() {
        let cases: Vec<(LabeledGraph, Vec<Word>)> = vec![
            (even(), vec![w("11")]),
            (even(), vec![w("101")]),
            (LabeledGraph::full_shift(2), vec![w("100"), w("111")]),
            (LabeledGraph::full_shift(3), vec![w("12"), w("00")]),
        ];
        for (g, k) in cases {
            let counts = nums(&count_words(&g, &k, 5));
            for n in 1..=5 {
                let brute = brute_language(&g, &k, n, 5);
                assert_eq!(counts[n], brute.len() as u64, "{k:?} n={n}");
            }
        }
    }

    fn ln_big(x: &BigUint) -> f64 {
        let s = x.to_string();
        let k = s.len().min(15);
        s[..k].parse::<f64>().unwrap().ln() + (s.len() - k) as f64 * 10f64.ln()
    }

    #[test]
    fn entropy_matches_growth() {
        for g in [even(), LabeledGraph::full_shift(3), LabeledGraph::edge_shift(&dgap4())] {
            let la = LanguageAutomaton::new(&g, &[]);
            let f = la.counts(200);
            let h = la.growth().value.ln();
            assert!((ln_big(&f[200]) / 200.0 - h).abs() < 0.02);
        }
    }

    #[test]
    fn endpoints_and_preimages() {
        let g = even();
        assert_eq!(word_endpoints(&g, &w("1")), (BTreeSet::from([0]), BTreeSet::from([0])));
        assert_eq!(word_endpoints(&g, &w("00")), (BTreeSet::from([0, 1]), BTreeSet::from([0, 1])));
        let full = LabeledGraph::full_shift(2);
        assert_eq!(word_endpoints(&full, &w("0110")), (BTreeSet::from([0]), BTreeSet::from([0])));
        assert_eq!(label_preimages(&g, &w("000")).len(), 2);
        assert_eq!(label_preimages(&full, &w("0101")), vec![vec![0, 1, 0, 1]]);
        // d = 2 presentation: 0-cycle v0 -> v1 -> v0 plus a 1-loop at v0.
        let d2 = LabeledGraph::new(2, &[(0, 0, 1), (0, 1, 0), (1, 0, 0)]).unwrap();
        assert_eq!(label_preimages(&d2, &w("11")), vec![vec![0, 0]]);
    }

    #[test]
    fn right_resolving_preimage_bound() {
        let fixtures = [even(), LabeledGraph::full_shift(3), LabeledGraph::new(3, &[(0, 1, 0), (1, 2, 0), (2, 0, 0), (0, 0, 1)]).unwrap()];
        for g in &fixtures {
            assert!(g.is_right_resolving());
            let alphabet = crate::word::Alphabet::new(g.alphabet()).unwrap();
            for n in 1..=8 {
                for word in alphabet.words(n) {
                    assert!(label_preimages(g, &word).len() <= g.vertices());
                }
            }
        }
    }

    #[test]
    fn aho_corasick_finds_patterns() {
        let ac = AhoCorasick::new(2, &[w("101"), w("11")]);
        assert!(ac.finds(w("0101").symbols()));
        assert!(ac.finds(w("0110").symbols()));
        assert!(!ac.finds(w("1001001").symbols()));
    }

    #[test]
    fn core_of_nonresolving_presentation() {
        // Two 0-loops on different vertices joined by 1-edges.
        let g = LabeledGraph::new(2, &[(0, 0, 0), (0, 1, 0), (1, 1, 0), (1, 0, 1)]).unwrap();
        let rr = right_resolving_core(&g);
        assert!(rr.is_right_resolving() && rr.is_essential());
        let a = count_words(&g, &[], 8);
        let b = count_words(&rr, &[], 8);
        assert_eq!(a, b);
    }
}
