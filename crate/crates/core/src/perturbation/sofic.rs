use std::collections::HashMap;

use serde::Serialize;

use crate::automata::{label_preimages, right_resolving_core, AhoCorasick, LabeledGraph, LanguageAutomaton};
use crate::error::Result;
use crate::word::{Symbol, Word};

use super::sft::{ambient_lambda, sft_multi_gf};
use super::{EngineOptions, ForbiddenSet, OracleCheck, PerturbationResult};

#[derive(Clone, Debug, Serialize)]
pub struct SoficPerturbation {
    pub result: PerturbationResult,
    /// Presentation of `X_K`, labeled by the original alphabet.
    pub presentation: LabeledGraph,
    /// Edge walks of the right-resolving presentation labeled by words of `K`.
    pub preimages: Vec<Vec<usize>>,
}

pub fn sofic_perturb(g: &LabeledGraph, w: &Word, opts: EngineOptions) -> Result<SoficPerturbation> {
    sofic_perturb_set(g, &ForbiddenSet::new([w.clone()])?, opts)
}

/// Lifts `K` to the edge shift of a right-resolving presentation and solves
/// the edge-shift problem there. The lifted entropy equals `h(X_K)`.
pub fn sofic_perturb_set(g: &LabeledGraph, k: &ForbiddenSet, opts: EngineOptions) -> Result<SoficPerturbation> {
    let rr = right_resolving_core(g);
    let n = opts.horizon();
    let ambient = ambient_lambda(rr.graph(), opts.tol);
    let la = LanguageAutomaton::new(g, k.words());
    let base = LanguageAutomaton::new(g, &[]);
    let allowed: Vec<&Word> = k.words().iter().filter(|w| base.accepts(w)).collect();

    let mut preimages: Vec<Vec<usize>> = allowed.iter().flat_map(|w| label_preimages(&rr, w)).collect();
    preimages.sort();
    preimages.dedup();

    if la.is_empty() {
        let result = PerturbationResult::empty("sofic", ambient, &la, n);
        return Ok(SoficPerturbation { result, presentation: la.presentation().clone(), preimages });
    }
    if preimages.is_empty() {
        let mut result = PerturbationResult::new("sofic", ambient, ambient, OracleCheck::new(&la, n, ambient));
        result.notes.push("no word of K is in L(X); X_K = X".into());
        return Ok(SoficPerturbation { result, presentation: rr, preimages });
    }

    let lifted = sft_multi_gf(rr.graph(), &preimages, opts)?;
    let mut result = PerturbationResult::new("sofic", lifted.lambda, ambient, OracleCheck::new(&la, n, lifted.lambda));
    result.characteristic = lifted.characteristic;
    result.notes = lifted.notes;
    result
        .notes
        .push(format!("{} preimage walks on a {}-vertex presentation", preimages.len(), rr.vertices()));
    let presentation = lift_presentation(&rr, &preimages);
    Ok(SoficPerturbation { result, presentation, preimages })
}

/// Product of `g` with the matcher of the forbidden edge walks, labeled by
/// the labels of `g` and pruned to its core.
fn lift_presentation(g: &LabeledGraph, walks: &[Vec<usize>]) -> LabeledGraph {
    let edges = g.graph().edges().len() as u32;
    let patterns: Vec<Word> = walks.iter().map(|w| Word::new(w.iter().map(|&e| e as Symbol).collect())).collect();
    let ac = AhoCorasick::new(edges.max(1), &patterns);
    let out = g.graph().out_edges();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut states: Vec<(usize, usize)> = (0..g.vertices()).map(|v| (v, 0)).collect();
    for (i, &s) in states.iter().enumerate() {
        index.insert(s, i);
    }
    let mut triples = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (v, a) = states[i];
        for &e in &out[v] {
            let a2 = ac.step(a, e as Symbol);
            if ac.is_match(a2) {
                continue;
            }
            let key = (g.graph().target(e), a2);
            let id = *index.entry(key).or_insert_with(|| {
                states.push(key);
                states.len() - 1
            });
            triples.push((i, id, g.label(e)));
        }
        i += 1;
    }
    LabeledGraph::new(states.len(), &triples)
        .expect("valid product")
        .with_alphabet(g.alphabet())
        .core()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::count_words;

    const PHI: f64 = 1.618_033_988_749_895;
    const PLASTIC: f64 = 1.324_717_957_244_746;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn even() -> LabeledGraph {
        LabeledGraph::new(2, &[(0, 0, 1), (0, 1, 0), (1, 0, 0)]).unwrap()
    }

    #[test]
    fn fixtures() {
        let opts = EngineOptions::default();
        let r = sofic_perturb(&even(), &w("11"), opts).unwrap();
        assert!((r.result.lambda - PLASTIC).abs() < 1e-11);
        assert!(r.result.oracle.lambda_agrees);
        let r = sofic_perturb(&LabeledGraph::full_shift(2), &w("11"), opts).unwrap();
        assert!((r.result.lambda - PHI).abs() < 1e-11);
        let r = sofic_perturb(&even(), &w("1"), opts).unwrap();
        assert_eq!(r.result.lambda, 1.0);
        assert!(r.result.oracle.lambda_agrees);
    }

    #[test]
    fn words_outside_the_language_are_no_ops() {
        let r = sofic_perturb(&even(), &w("101"), EngineOptions::default()).unwrap();
        assert!(r.preimages.is_empty());
        assert_eq!(r.result.lambda, r.result.ambient_lambda);
    }

    #[test]
    fn lifted_presentation_presents_x_k() {
        for word in ["11", "1001", "00", "0110"] {
            let k = [w(word)];
            let r = sofic_perturb(&even(), &k[0], EngineOptions::default()).unwrap();
            assert_eq!(
                count_words(&r.presentation, &[], 12),
                count_words(&even(), &k, 12),
                "{word}"
            );
        }
    }
}
