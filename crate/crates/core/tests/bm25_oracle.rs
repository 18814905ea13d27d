mod common;

use negir::index::{Bm25Params, Field, WeightedQuery};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn search_matches_exhaustive_scoring(seed in any::<u64>(), n_docs in 1usize..120, vocab in 2usize..50) {
        let mut r = common::rng(seed);
        let (ids, docs) = common::random_corpus(&mut r, n_docs, vocab, 30);
        let params = Bm25Params::default();
        let index = common::index_tokens(&ids, &docs, params);
        let query: Vec<(String, f64)> = (0..r.gen_range(1..8))
            .map(|_| (format!("w{}", r.gen_range(0..vocab + 2)), [1.0, 0.3, 2.0][r.gen_range(0..3)]))
            .collect();
        let mut wq = WeightedQuery::new(Field::Plain);
        for (t, w) in &query {
            wq.push(t.clone(), *w);
        }

        let mut expected = Vec::new();
        for (i, id) in ids.iter().enumerate() {
            let brute = common::bm25_bruteforce(&docs, &query, i, params.k1, params.b);
            let got = index.bm25_score(&wq, id).unwrap();
            prop_assert!((got - brute).abs() <= 1e-9 * brute.abs().max(1.0), "{} vs {}", got, brute);
            prop_assert!(got >= 0.0);
            if got > 0.0 {
                expected.push((id.clone(), got));
            }
        }
        let expected = common::rank_pairs(expected);
        let hits = index.search(&wq, ids.len());
        let got: Vec<(String, f64)> = hits.into_iter().map(|d| (d.doc_id, d.score)).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn plain_terms_never_hit_the_tagged_prefix(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let (ids, docs) = common::random_corpus(&mut r, 20, 10, 10);
        let index = common::index_tokens(&ids, &docs, Bm25Params::default());
        for t in 0..10 {
            let q = WeightedQuery::uniform(Field::Tagged, [format!("[nx]w{t}")]);
            prop_assert!(index.search(&q, 100).is_empty());
        }
    }
}

#[test]
fn more_occurrences_never_lower_the_score() {
    // fixed-length documents that differ only in how often the query term appears
    let params = Bm25Params::default();
    let ids: Vec<String> = (0..6).map(|i| format!("d{i}")).collect();
    let docs: Vec<Vec<String>> = (0..6)
        .map(|tf| {
            (0..8)
                .map(|j| {
                    if j < tf {
                        "fever".to_string()
                    } else {
                        format!("filler{j}")
                    }
                })
                .collect()
        })
        .collect();
    let index = common::index_tokens(&ids, &docs, params);
    let q = WeightedQuery::uniform(Field::Plain, ["fever"]);
    let scores: Vec<f64> = ids.iter().map(|id| index.bm25_score(&q, id).unwrap()).collect();
    assert_eq!(scores[0], 0.0);
    for w in scores.windows(2) {
        assert!(w[1] >= w[0], "{scores:?}");
    }
}
