//! TREC-style evaluation: qrels and run files, P@k, nDCG, infAP and
//! R-precision, per-topic and mean reports, and the with/without-negation
//! group comparison.

mod groups;
mod metrics;
mod report;
mod trec;

pub use groups::{gap_reduction, group_analysis, relative_improvement, GroupReport, GroupRow};
pub use metrics::{average_precision, inf_ap, ndcg, p_at_k, r_prec, INFAP_EPSILON};
pub use report::{evaluate, evaluate_topics, format_table, EvalConfig, MetricValues, MetricsReport, TopicMetrics};
pub use trec::{read_pool, read_qrels, read_run, write_run, JudgmentPool, Qrels, RankedDoc, RunResult};

use std::cmp::Ordering;

/// Orders topic ids numerically when both parse as integers, otherwise as
/// strings; numeric ids sort first.
pub fn topic_order(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}
