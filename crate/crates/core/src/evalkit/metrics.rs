//! Per-topic retrieval metrics. Unjudged documents count as non-relevant
//! and a grade of 1 or more is relevant.

use std::collections::{HashMap, HashSet};

use super::Qrels;

/// Smoothing constant of the infAP estimator (as in trec_eval).
pub const INFAP_EPSILON: f64 = 0.00001;

fn grade(judged: Option<&HashMap<String, u32>>, doc: &str) -> u32 {
    judged.and_then(|j| j.get(doc)).copied().unwrap_or(0)
}

/// Fraction of the top `k` that is relevant. Missing ranks count as
/// non-relevant, so a short ranking is still divided by `k`.
pub fn p_at_k<S: AsRef<str>>(ranking: &[S], qrels: &Qrels, topic: &str, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let judged = qrels.topic(topic);
    let hits = ranking
        .iter()
        .take(k)
        .filter(|d| grade(judged, d.as_ref()) >= 1)
        .count();
    hits as f64 / k as f64
}

/// nDCG at `cutoff` with gain = grade and discount `1 / log2(rank + 1)`.
/// Returns 0 when the topic has no relevant documents.
pub fn ndcg<S: AsRef<str>>(ranking: &[S], qrels: &Qrels, topic: &str, cutoff: usize) -> f64 {
    let judged = qrels.topic(topic);
    let discount = |i: usize| 1.0 / ((i + 2) as f64).log2();
    let dcg: f64 = ranking
        .iter()
        .take(cutoff)
        .enumerate()
        .map(|(i, d)| grade(judged, d.as_ref()) as f64 * discount(i))
        .sum();
    let mut ideal: Vec<u32> = judged
        .map(|j| j.values().copied().filter(|&g| g > 0).collect())
        .unwrap_or_default();
    ideal.sort_unstable_by(|a, b| b.cmp(a));
    let idcg: f64 = ideal
        .iter()
        .take(cutoff)
        .enumerate()
        .map(|(i, &g)| g as f64 * discount(i))
        .sum();
    if idcg > 0.0 {
        dcg / idcg
    } else {
        0.0
    }
}

/// Uninterpolated average precision over all relevant documents.
pub fn average_precision<S: AsRef<str>>(ranking: &[S], qrels: &Qrels, topic: &str) -> f64 {
    let r = qrels.num_relevant(topic);
    if r == 0 {
        return 0.0;
    }
    let judged = qrels.topic(topic);
    let mut found = 0usize;
    let mut sum = 0.0;
    for (i, d) in ranking.iter().enumerate() {
        if grade(judged, d.as_ref()) >= 1 {
            found += 1;
            sum += found as f64 / (i + 1) as f64;
        }
    }
    sum / r as f64
}

/// Inferred AP. Without a pool the judgments are taken as complete and
/// the estimate is plain AP. With a pool, documents are split into judged
/// (in the qrels), pooled but unjudged (in `pool` only) and unpooled; the
/// expected precision above each relevant document is estimated from the
/// judged fraction of the pooled documents ranked above it.
pub fn inf_ap<S: AsRef<str>>(ranking: &[S], qrels: &Qrels, topic: &str, pool: Option<&HashSet<String>>) -> f64 {
    let Some(pool) = pool else {
        return average_precision(ranking, qrels, topic);
    };
    let r = qrels.num_relevant(topic);
    if r == 0 {
        return 0.0;
    }
    let judged = qrels.topic(topic);
    let (mut rel, mut nonrel, mut unjudged) = (0usize, 0usize, 0usize);
    let mut sum = 0.0;
    for (i, d) in ranking.iter().enumerate() {
        let d = d.as_ref();
        match judged.and_then(|j| j.get(d)) {
            Some(&g) if g >= 1 => {
                if i == 0 {
                    sum += 1.0;
                } else {
                    let k = i as f64;
                    let pooled_above = (rel + nonrel + unjudged) as f64;
                    let rel_fraction = (rel as f64 + INFAP_EPSILON) / ((rel + nonrel) as f64 + 2.0 * INFAP_EPSILON);
                    sum += 1.0 / (k + 1.0) + (k / (k + 1.0)) * (pooled_above / k) * rel_fraction;
                }
                rel += 1;
            }
            Some(_) => nonrel += 1,
            None if pool.contains(d) => unjudged += 1,
            None => {}
        }
    }
    sum / r as f64
}

/// Precision at rank R, R being the number of relevant documents.
pub fn r_prec<S: AsRef<str>>(ranking: &[S], qrels: &Qrels, topic: &str) -> f64 {
    let r = qrels.num_relevant(topic);
    if r == 0 {
        return 0.0;
    }
    p_at_k(ranking, qrels, topic, r)
}
