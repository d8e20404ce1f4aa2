use proptest::prelude::*;

use subshift::automata::{DirectedGraph, LabeledGraph, LanguageAutomaton};
use subshift::conjugacy::SwapCode;
use subshift::escape::{lambda_n, lambda_sequence, HoleFamily, Point};
use subshift::perturbation::{sft_multi_gf, sgap_perturb_gf, EngineOptions, ForbiddenSet};
use subshift::shifts::{sgap_allows, GapSet};
use subshift::word::{autocorrelation, Word};

fn opts() -> EngineOptions {
    EngineOptions { n_max: 10, ..Default::default() }
}

fn word(max_symbol: u32, len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..max_symbol, len).prop_map(Word::new)
}

fn walks(k: &[Word]) -> Vec<Vec<usize>> {
    k.iter().map(|w| w.symbols().iter().map(|&s| s as usize).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multi_word_series_matches_counts(k in prop::collection::vec(word(2, 1..=5), 1..=3)) {
        let k = ForbiddenSet::new(k).unwrap().words().to_vec();
        let la = LanguageAutomaton::new(&LabeledGraph::full_shift(2), &k);
        prop_assume!(!la.is_empty());
        let r = sft_multi_gf(&DirectedGraph::full_shift(2), &walks(&k), opts()).unwrap();
        prop_assert_eq!(r.oracle.series_matches, Some(true));
        prop_assert!(r.oracle.lambda_agrees);
    }

    #[test]
    fn forbidding_more_never_raises_lambda(a in word(3, 1..=4), b in word(3, 1..=4)) {
        let g = DirectedGraph::full_shift(3);
        let one = sft_multi_gf(&g, &walks(std::slice::from_ref(&a)), opts()).unwrap();
        let k = ForbiddenSet::new([a, b]).unwrap();
        let two = sft_multi_gf(&g, &walks(k.words()), opts()).unwrap();
        prop_assert!(two.lambda <= one.lambda + 1e-9);
    }

    #[test]
    fn equal_correlations_give_equal_entropy(a in word(2, 3..=7), b in word(2, 3..=7)) {
        prop_assume!(a.len() == b.len() && autocorrelation(&a) == autocorrelation(&b));
        let g = DirectedGraph::full_shift(2);
        let la = sft_multi_gf(&g, &walks(&[a]), opts()).unwrap().lambda;
        let lb = sft_multi_gf(&g, &walks(&[b]), opts()).unwrap().lambda;
        prop_assert!((la - lb).abs() < 1e-9);
    }

    #[test]
    fn sgap_lambda_matches_oracle(w in word(2, 2..=8), period in 1usize..=3) {
        let s = GapSet::multiples(period).unwrap();
        let edges_zero = w.first() == Some(0) && w.last() == Some(0);
        prop_assume!(sgap_allows(&s, &w) && w.symbols().contains(&1) && !edges_zero);
        let r = sgap_perturb_gf(&s, &w, opts()).unwrap();
        prop_assert!(r.oracle.lambda_agrees, "{} vs {}", r.lambda, r.oracle.oracle_lambda);
    }

    #[test]
    fn swap_is_an_involution(x in word(3, 0..=14)) {
        let code = SwapCode::new("120".parse().unwrap(), "110".parse().unwrap()).unwrap();
        prop_assert_eq!(code.apply(&code.apply(&x)), x);
    }

    #[test]
    fn lambda_n_is_the_single_word_entropy(w in word(2, 1..=6)) {
        let l = lambda_n(2, std::slice::from_ref(&w), 1e-12).unwrap();
        let r = sft_multi_gf(&DirectedGraph::full_shift(2), &walks(&[w]), opts()).unwrap();
        prop_assert!((l - r.lambda).abs() < 1e-8);
    }
}

#[test]
fn two_point_hole_sequence_converges() {
    let points = vec!["0(1)".parse::<Point>().unwrap(), "(1)".parse().unwrap()];
    let rows = lambda_sequence(&HoleFamily::new(2, points).unwrap(), 4..=14, 1e-14).unwrap();
    let last = rows.last().unwrap();
    assert_eq!(last.n, 14);
    assert!((last.scaled_gap - 1.0).abs() < 0.01, "{}", last.scaled_gap);
    let errors: Vec<f64> = rows.iter().map(|r| (r.scaled_gap - 1.0).abs()).collect();
    assert!(errors.windows(2).all(|p| p[1] <= p[0] + 1e-12), "{errors:?}");
}
