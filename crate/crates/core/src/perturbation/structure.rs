use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use crate::automata::{Dfa, LabeledGraph, LanguageAutomaton};
use crate::word::Word;

/// Finite-horizon irreducibility: every `u, w ∈ L_j`, `j ≤ max_len`, are
/// joined by some `v` with `|v| ≤ horizon`. A failure is a certificate of
/// "not verified at this horizon" with a witness pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Irreducibility {
    pub verified: bool,
    pub max_len: usize,
    pub witness: Option<(Word, Word)>,
}

/// Hypotheses of the synchronization criterion for a candidate word `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SyncCertificate {
    pub word: Word,
    pub avoids_forbidden: bool,
    pub in_language: bool,
    pub synchronizing_ambient: bool,
    pub synchronizing_perturbed: bool,
}

impl SyncCertificate {
    pub fn passes(&self) -> bool {
        self.avoids_forbidden && self.in_language && self.synchronizing_ambient && self.synchronizing_perturbed
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub horizon: usize,
    pub nonempty: bool,
    pub irreducible: Irreducibility,
    pub certificate: Option<SyncCertificate>,
    /// All verdicts hold up to `horizon` only.
    pub horizon_limited: bool,
}

pub fn check_structure(g: &LabeledGraph, forbidden: &[Word], horizon: usize, candidate: Option<&Word>) -> StructureReport {
    let horizon = horizon.max(1);
    let la = LanguageAutomaton::new(g, forbidden);
    let nonempty = !la.counts(horizon)[horizon].is_zero();
    let irreducible = irreducibility(la.dfa(), horizon, (horizon / 3).max(1));
    let certificate = candidate.map(|m| {
        let ambient = LanguageAutomaton::new(g, &[]);
        SyncCertificate {
            word: m.clone(),
            avoids_forbidden: forbidden.iter().all(|w| !m.is_subword_of(w)),
            in_language: la.accepts(m),
            synchronizing_ambient: synchronizing(ambient.dfa(), m, horizon),
            synchronizing_perturbed: synchronizing(la.dfa(), m, horizon),
        }
    });
    StructureReport { horizon, nonempty, irreducible, certificate, horizon_limited: true }
}

/// States reachable from `q` in at most `steps` transitions.
fn reach(dfa: &Dfa, q: usize, steps: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([q]);
    let mut frontier = vec![q];
    for _ in 0..steps {
        let mut next = Vec::new();
        for &p in &frontier {
            for s in 0..dfa.alphabet() {
                if let Some(r) = dfa.step(p, s) {
                    if seen.insert(r) {
                        next.push(r);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    seen
}

fn irreducibility(dfa: &Dfa, horizon: usize, max_len: usize) -> Irreducibility {
    for j in 1..=max_len {
        let words = dfa.words(j);
        let mut by_state: Vec<(usize, &Word)> = Vec::new();
        for u in &words {
            let q = dfa.run(dfa.initial(), u.symbols()).expect("accepted");
            if !by_state.iter().any(|&(p, _)| p == q) {
                by_state.push((q, u));
            }
        }
        for (q, u) in by_state {
            let reachable = reach(dfa, q, horizon);
            for w in &words {
                if !reachable.iter().any(|&p| dfa.run(p, w.symbols()).is_some()) {
                    return Irreducibility { verified: false, max_len, witness: Some((u.clone(), w.clone())) };
                }
            }
        }
    }
    Irreducibility { verified: true, max_len, witness: None }
}

/// Whether `mv ∈ L` implies `umv ∈ L` for all `u` with `um ∈ L`, over
/// `|u|, |v| ≤ horizon`.
fn synchronizing(dfa: &Dfa, m: &Word, horizon: usize) -> bool {
    let Some(base) = dfa.run(dfa.initial(), m.symbols()) else {
        return false;
    };
    let ends: BTreeSet<usize> = reach(dfa, dfa.initial(), horizon)
        .into_iter()
        .filter_map(|q| dfa.run(q, m.symbols()))
        .collect();
    ends.into_iter().all(|q| future_included(dfa, base, q, horizon))
}

/// Every word of length at most `depth` readable from `a` is readable from `b`.
fn future_included(dfa: &Dfa, a: usize, b: usize, depth: usize) -> bool {
    let mut seen = BTreeSet::from([(a, b)]);
    let mut frontier = vec![(a, b)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &(p, q) in &frontier {
            for s in 0..dfa.alphabet() {
                if let Some(p2) = dfa.step(p, s) {
                    let Some(q2) = dfa.step(q, s) else { return false };
                    if seen.insert((p2, q2)) {
                        next.push((p2, q2));
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shifts::{sgap_presentation, GapSet};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn full_shift_minus_10_is_reducible() {
        for l in [1, 3, 6, 12, 30] {
            let r = check_structure(&LabeledGraph::full_shift(2), &[w("10")], l, Some(&w("11")));
            assert!(r.nonempty);
            assert!(!r.irreducible.verified, "horizon {l}");
            assert_eq!(r.irreducible.witness, Some((w("1"), w("0"))));
        }
    }

    #[test]
    fn one_synchronizes_gap_shifts() {
        for s in [GapSet::naturals(), GapSet::multiples(2).unwrap(), GapSet::finite(&[0, 2, 5]).unwrap()] {
            for k in 1..=4 {
                let r = check_structure(&sgap_presentation(&s), &[Word::repeat(0, k)], 30, Some(&w("1")));
                let c = r.certificate.unwrap();
                assert!(c.passes(), "{s} 0^{k}: {c:?}");
            }
        }
    }

    #[test]
    fn zero_is_not_synchronizing_for_the_even_shift() {
        let even = sgap_presentation(&GapSet::multiples(2).unwrap());
        let c = check_structure(&even, &[], 10, Some(&w("0"))).certificate.unwrap();
        assert!(!c.synchronizing_ambient);
    }

    #[test]
    fn everything_forbidden() {
        let r = check_structure(&LabeledGraph::full_shift(2), &[w("0"), w("1")], 5, None);
        assert!(!r.nonempty);
    }
}
