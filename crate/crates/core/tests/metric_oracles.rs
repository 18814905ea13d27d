mod common;

use common::reference;
use negir::evalkit::{average_precision, evaluate, inf_ap, ndcg, p_at_k, r_prec, EvalConfig, Qrels, RunResult};
use negir::index::ScoredDoc;
use proptest::prelude::*;
use rand::seq::SliceRandom;

const TOL: f64 = 1e-12;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn metrics_match_reference(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let (ranking, qrels) = common::random_eval_instance(&mut r);
        let p10 = p_at_k(&ranking, &qrels, "q", 10);
        prop_assert!((p10 - reference::precision(&ranking, &qrels, 10)).abs() < TOL);
        prop_assert!(((p10 * 10.0).round() - p10 * 10.0).abs() < 1e-9);
        prop_assert!((ndcg(&ranking, &qrels, "q", 1000) - reference::ndcg(&ranking, &qrels)).abs() < TOL);
        let ap = average_precision(&ranking, &qrels, "q");
        prop_assert!((ap - reference::ap(&ranking, &qrels)).abs() < TOL);
        prop_assert_eq!(inf_ap(&ranking, &qrels, "q", None), ap);
        prop_assert!((r_prec(&ranking, &qrels, "q") - reference::r_prec(&ranking, &qrels)).abs() < TOL);
        for v in [p10, ap, ndcg(&ranking, &qrels, "q", 1000), r_prec(&ranking, &qrels, "q")] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn reordering_below_the_cutoff_keeps_precision(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let (mut ranking, qrels) = common::random_eval_instance(&mut r);
        let before = p_at_k(&ranking, &qrels, "q", 5);
        if ranking.len() > 5 {
            ranking[5..].shuffle(&mut r);
        }
        prop_assert_eq!(p_at_k(&ranking, &qrels, "q", 5), before);
    }

    #[test]
    fn swapping_equal_grades_keeps_ndcg(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let (mut ranking, qrels) = common::random_eval_instance(&mut r);
        let grade = |d: &String| qrels.grade("q", d).unwrap_or(0);
        let before = ndcg(&ranking, &qrels, "q", 1000);
        for i in 0..ranking.len() {
            for j in i + 1..ranking.len() {
                if grade(&ranking[i]) == grade(&ranking[j]) {
                    ranking.swap(i, j);
                    prop_assert!((ndcg(&ranking, &qrels, "q", 1000) - before).abs() < TOL);
                }
            }
        }
    }

    #[test]
    fn mean_ignores_topic_order(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let mut qrels = Qrels::new();
        let mut topics = Vec::new();
        for t in 0..8 {
            let (ranking, q) = common::random_eval_instance(&mut r);
            for (doc, g) in q.topic("q").unwrap() {
                qrels.insert(t.to_string(), doc.as_str(), *g).unwrap();
            }
            topics.push((t.to_string(), ranking));
        }
        let build = |order: &[(String, Vec<String>)]| {
            let mut run = RunResult::new("r");
            for (t, ranking) in order {
                let docs = ranking
                    .iter()
                    .enumerate()
                    .map(|(i, d)| ScoredDoc { doc_id: d.clone(), score: -(i as f64) })
                    .collect();
                run.insert_ranking(t.clone(), docs);
            }
            evaluate(&run, &qrels, &EvalConfig::default()).mean
        };
        let a = build(&topics);
        topics.shuffle(&mut r);
        let b = build(&topics);
        for (x, y) in a.as_array().iter().zip(b.as_array()) {
            prop_assert!((x - y).abs() < TOL);
        }
    }
}

#[test]
fn ideal_ranking_has_unit_ndcg() {
    let mut r = common::rng(7);
    for _ in 0..200 {
        let (_, qrels) = common::random_eval_instance(&mut r);
        let mut docs: Vec<(&String, &u32)> = qrels.topic("q").unwrap().iter().collect();
        docs.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
        let ideal: Vec<&str> = docs.iter().map(|(d, _)| d.as_str()).collect();
        if qrels.num_relevant("q") > 0 {
            assert_eq!(ndcg(&ideal, &qrels, "q", 1000), 1.0);
        }
    }
}
