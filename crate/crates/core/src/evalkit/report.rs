use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::metrics::{inf_ap, ndcg, p_at_k, r_prec};
use super::{topic_order, JudgmentPool, Qrels, RunResult};

#[derive(Debug, Clone)]
pub struct EvalConfig {
    pub ndcg_cutoff: usize,
    pub precision_depth: usize,
    /// Sampling pool for infAP; judgments are treated as complete without it.
    pub pool: Option<JudgmentPool>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            ndcg_cutoff: 1000,
            precision_depth: 10,
            pool: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricValues {
    pub p_at_10: f64,
    pub ndcg: f64,
    pub inf_ap: f64,
    pub r_prec: f64,
}

impl MetricValues {
    pub fn as_array(&self) -> [f64; 4] {
        [self.p_at_10, self.ndcg, self.inf_ap, self.r_prec]
    }

    /// Arithmetic mean; all zeros for an empty input.
    pub fn mean<'a>(values: impl IntoIterator<Item = &'a MetricValues>) -> MetricValues {
        let mut sum = [0.0; 4];
        let mut n = 0usize;
        for v in values {
            for (s, x) in sum.iter_mut().zip(v.as_array()) {
                *s += x;
            }
            n += 1;
        }
        if n == 0 {
            return MetricValues::default();
        }
        let d = n as f64;
        MetricValues {
            p_at_10: sum[0] / d,
            ndcg: sum[1] / d,
            inf_ap: sum[2] / d,
            r_prec: sum[3] / d,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicMetrics {
    pub topic_id: String,
    #[serde(flatten)]
    pub values: MetricValues,
    pub num_relevant: usize,
    pub num_retrieved: usize,
    /// No document with grade >= 1; every metric is 0.
    pub no_relevant: bool,
    /// In the qrels but absent from the run; every metric is 0.
    pub missing_from_run: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub run_tag: String,
    pub topics: Vec<TopicMetrics>,
    pub mean: MetricValues,
}

fn topic_metrics(run: &RunResult, qrels: &Qrels, topic: &str, cfg: &EvalConfig) -> TopicMetrics {
    let ranking = run.ranking(topic);
    let pool = cfg.pool.as_ref().and_then(|p| p.topic(topic));
    // pool entries extend the judged documents, they never replace them
    let pool = pool.map(|p| {
        let mut all = p.clone();
        if let Some(judged) = qrels.topic(topic) {
            all.extend(judged.keys().cloned());
        }
        all
    });
    TopicMetrics {
        topic_id: topic.to_string(),
        values: MetricValues {
            p_at_10: p_at_k(&ranking, qrels, topic, cfg.precision_depth),
            ndcg: ndcg(&ranking, qrels, topic, cfg.ndcg_cutoff),
            inf_ap: inf_ap(&ranking, qrels, topic, pool.as_ref()),
            r_prec: r_prec(&ranking, qrels, topic),
        },
        num_relevant: qrels.num_relevant(topic),
        num_retrieved: ranking.len(),
        no_relevant: qrels.num_relevant(topic) == 0,
        missing_from_run: !run.topics.contains_key(topic),
    }
}

/// Evaluates every topic in the qrels; the mean is unweighted over them.
pub fn evaluate(run: &RunResult, qrels: &Qrels, cfg: &EvalConfig) -> MetricsReport {
    let topics: Vec<&str> = qrels.topics();
    evaluate_topics(run, qrels, cfg, &topics)
}

/// Evaluates the given topics that also appear in the qrels.
pub fn evaluate_topics<S: AsRef<str>>(run: &RunResult, qrels: &Qrels, cfg: &EvalConfig, topics: &[S]) -> MetricsReport {
    let mut ids: Vec<&str> = topics
        .iter()
        .map(AsRef::as_ref)
        .filter(|t| qrels.contains_topic(t))
        .collect();
    ids.sort_by(|a, b| topic_order(a, b));
    ids.dedup();
    let topics: Vec<TopicMetrics> = ids.iter().map(|t| topic_metrics(run, qrels, t, cfg)).collect();
    let mean = MetricValues::mean(topics.iter().map(|t| &t.values));
    MetricsReport {
        run_tag: run.run_tag.clone(),
        topics,
        mean,
    }
}

/// Aligned text table with one row per label, in the column order
/// P@10, NDCG, infAP, RPrec.
pub fn format_table(rows: &[(String, MetricValues)]) -> String {
    let width = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0).max(8);
    let mut out = format!(
        "{:<width$}  {:>8}  {:>8}  {:>8}  {:>8}\n",
        "", "P@10", "NDCG", "infAP", "RPrec"
    );
    for (label, v) in rows {
        let _ = writeln!(
            out,
            "{:<width$}  {:>8.4}  {:>8.4}  {:>8.4}  {:>8.4}",
            label, v.p_at_10, v.ndcg, v.inf_ap, v.r_prec
        );
    }
    out
}
