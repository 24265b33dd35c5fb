use std::collections::BTreeSet;

use lamtool_core::graph_map::{GraphSelfMap, DEFAULT_SIZE_CAP};
use lamtool_core::lamination::LaminaryLanguage;
use lamtool_core::marked_graph::MarkedMetricGraph;
use lamtool_core::substitution::Substitution;
use lamtool_core::words::{is_reduced, reduce, EdgePath, Letter};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        max_global_rejects: 1_000_000,
        rng_seed: RngSeed::Fixed(7),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn primitive_substitution() -> impl Strategy<Value = Substitution> {
    (2usize..=4)
        .prop_flat_map(|k| prop::collection::vec(prop::collection::vec(0..k, 1..=3), k))
        .prop_filter_map("not primitive", |images| {
            let names = ["a", "b", "c", "d"];
            let rules: Vec<(String, String)> = images
                .iter()
                .enumerate()
                .map(|(i, img)| (names[i].to_string(), img.iter().map(|&j| names[j]).collect::<Vec<_>>().join(" ")))
                .collect();
            let refs: Vec<(&str, &str)> = rules.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            Substitution::from_names(&refs)
                .ok()
                .filter(|s| s.is_primitive() && s.letters().len() == images.len())
        })
}

// Factors up to `n` of long iterates of every letter.
fn iterate_factors(s: &Substitution, n: usize) -> BTreeSet<Vec<Letter>> {
    let mut out = BTreeSet::new();
    for &l in s.letters() {
        let mut w = vec![l];
        while w.len() < 20_000 {
            w = s.apply(&w);
        }
        for len in 1..=n {
            out.extend(w.windows(len).map(<[Letter]>::to_vec));
        }
    }
    out
}

fn rose(m: usize) -> MarkedMetricGraph {
    MarkedMetricGraph::rose("r", &["a", "b", "c"][..m]).unwrap()
}

fn reduced_word(m: usize, len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(0..2 * m, len)
        .prop_map(|v| v.into_iter().map(Letter::from_index).collect::<Vec<_>>())
        .prop_filter("not reduced", |w| is_reduced(w))
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn factor_closure_matches_long_iterates(s in primitive_substitution()) {
        let n = 12;
        let lang = s.factor_language(n).unwrap();
        let members: BTreeSet<Vec<Letter>> = lang.members().map(|w| w.letters().to_vec()).collect();
        prop_assert_eq!(members, iterate_factors(&s, n));
    }

    #[test]
    fn apply_power_tightens_each_step(
        (m, images, path, k) in (2usize..=3).prop_flat_map(|m| (
            Just(m),
            prop::collection::vec(reduced_word(m, 1..=3), m),
            reduced_word(m, 1..=4),
            0usize..5,
        ))
    ) {
        let map = GraphSelfMap::on_rose(rose(m), images.into_iter().map(EdgePath::from).collect()).unwrap();
        let mut naive = path.clone();
        for _ in 0..k {
            naive = reduce(&naive.iter().flat_map(|&l| map.image(l).to_vec()).collect::<Vec<_>>());
        }
        let fast = map.apply_power(&path, k, DEFAULT_SIZE_CAP).unwrap();
        prop_assert_eq!(fast.letters(), &naive[..]);
    }

    #[test]
    fn window_languages_count_like_brute_force(
        allowed in prop::collection::btree_set(reduced_word(2, 2..=2), 1..=12)
    ) {
        let paths: Vec<EdgePath> = allowed.iter().cloned().map(EdgePath::from).collect();
        let lang = LaminaryLanguage::user_supplied(rose(2), &paths, false).unwrap();
        let n_max = 7;
        let table = lang.counts(n_max, DEFAULT_SIZE_CAP).unwrap();
        let letters: BTreeSet<Letter> = allowed.iter().flatten().copied().collect();
        // Words of length n whose length-2 windows are all allowed.
        let mut words: Vec<Vec<Letter>> = letters.iter().map(|&l| vec![l]).collect();
        for n in 1..=n_max {
            prop_assert_eq!(table.p[n - 1], words.len() as u64, "n = {}", n);
            let mut longer = Vec::new();
            for w in &words {
                for l in (0..4).map(Letter::from_index) {
                    if allowed.contains(&vec![w[w.len() - 1], l]) {
                        let mut next = w.clone();
                        next.push(l);
                        longer.push(next);
                    }
                }
            }
            words = longer;
        }
    }
}

#[test]
fn full_shift_counts() {
    let alpha = rose(2).alphabet().clone();
    let paths: Vec<EdgePath> = ["a a", "a b", "a b'", "b a", "b b", "b a'", "a' a'", "a' b", "a' b'", "b' a", "b' b'", "b' a'"]
        .iter()
        .map(|t| alpha.parse_path(t).unwrap())
        .collect();
    let lang = LaminaryLanguage::user_supplied(rose(2), &paths, true).unwrap();
    let table = lang.counts(20, DEFAULT_SIZE_CAP).unwrap();
    for n in 1..=20u32 {
        assert_eq!(table.p[n as usize - 1], 4 * 3u64.pow(n - 1));
    }
}
