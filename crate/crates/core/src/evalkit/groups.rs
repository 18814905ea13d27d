use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::report::{evaluate_topics, format_table, EvalConfig, MetricValues};
use super::{topic_order, Qrels, RunResult};
use crate::error::{Error, Result};
use crate::querygen::QueryBundle;

/// Share of the baseline's P@10 gap between negation-free and
/// negation-bearing topics that a strategy recovers on the latter. `None`
/// when the baseline shows no gap.
pub fn gap_reduction(base_plus: f64, base_minus: f64, strategy_minus: f64) -> Option<f64> {
    let gap = base_plus - base_minus;
    (gap != 0.0).then(|| (strategy_minus - base_minus) / gap)
}

/// `strategy / base - 1`, `None` for a zero base.
pub fn relative_improvement(base: f64, strategy: f64) -> Option<f64> {
    (base != 0.0).then(|| strategy / base - 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRow {
    pub strategy: String,
    /// Mean metrics over negation-free topics.
    pub d_plus: MetricValues,
    /// Mean metrics over negation-bearing topics.
    pub d_minus: MetricValues,
    pub gap_reduction_p10: Option<f64>,
    /// P@10 on the negation-bearing topics relative to the baseline there.
    pub relative_improvement_p10: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    pub baseline: String,
    pub d_plus_topics: Vec<String>,
    pub d_minus_topics: Vec<String>,
    pub rows: Vec<GroupRow>,
}

/// Splits topics by whether their bundle has negated terms and compares
/// every run against the baseline run on both groups.
pub fn group_analysis(
    bundles: &[QueryBundle],
    runs: &[(String, RunResult)],
    qrels: &Qrels,
    cfg: &EvalConfig,
    baseline: &str,
) -> Result<GroupReport> {
    let (mut d_plus, mut d_minus): (Vec<String>, Vec<String>) = (Vec::new(), Vec::new());
    for b in bundles {
        if b.n_neg == 0 {
            d_plus.push(b.topic_id.clone());
        } else {
            d_minus.push(b.topic_id.clone());
        }
    }
    d_plus.sort_by(|a, b| topic_order(a, b));
    d_minus.sort_by(|a, b| topic_order(a, b));

    let group_means = |run: &RunResult| {
        (
            evaluate_topics(run, qrels, cfg, &d_plus).mean,
            evaluate_topics(run, qrels, cfg, &d_minus).mean,
        )
    };

    let base_run = runs
        .iter()
        .find(|(name, _)| name == baseline)
        .map(|(_, r)| r)
        .ok_or_else(|| Error::InvalidArgument(format!("no run named `{baseline}` to compare against")))?;
    let (base_plus, base_minus) = group_means(base_run);

    let rows = runs
        .iter()
        .map(|(name, run)| {
            let (plus, minus) = group_means(run);
            GroupRow {
                strategy: name.clone(),
                d_plus: plus,
                d_minus: minus,
                gap_reduction_p10: gap_reduction(base_plus.p_at_10, base_minus.p_at_10, minus.p_at_10),
                relative_improvement_p10: relative_improvement(base_minus.p_at_10, minus.p_at_10),
            }
        })
        .collect();

    Ok(GroupReport {
        baseline: baseline.to_string(),
        d_plus_topics: d_plus,
        d_minus_topics: d_minus,
        rows,
    })
}

impl GroupReport {
    pub fn row(&self, strategy: &str) -> Option<&GroupRow> {
        self.rows.iter().find(|r| r.strategy == strategy)
    }

    /// Baseline advantage of the negation-free group, per metric, as
    /// `D+ / D- - 1`.
    pub fn baseline_group_difference(&self) -> Option<[Option<f64>; 4]> {
        let base = self.row(&self.baseline)?;
        let plus = base.d_plus.as_array();
        let minus = base.d_minus.as_array();
        Some(std::array::from_fn(|i| relative_improvement(minus[i], plus[i])))
    }

    /// Table with a `D+` row for the baseline and a `D-` row per run,
    /// followed by the P@10 gap reduction of each run.
    pub fn to_table(&self) -> String {
        let mut rows = Vec::new();
        if let Some(base) = self.row(&self.baseline) {
            rows.push((format!("{} D+", base.strategy), base.d_plus));
        }
        for r in &self.rows {
            rows.push((format!("{} D-", r.strategy), r.d_minus));
        }
        let mut out = format!(
            "D+ topics: {}  D- topics: {}\n",
            self.d_plus_topics.len(),
            self.d_minus_topics.len()
        );
        out.push_str(&format_table(&rows));
        out.push('\n');
        let width = self.rows.iter().map(|r| r.strategy.len()).max().unwrap_or(8);
        let pct = |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), |x| format!("{:.1}%", 100.0 * x));
        let _ = writeln!(
            out,
            "{:<width$}  {:>14}  {:>16}",
            "", "P@10 gap red.", "P@10 D- vs base"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<width$}  {:>14}  {:>16}",
                r.strategy,
                pct(r.gap_reduction_p10),
                pct(r.relative_improvement_p10)
            );
        }
        out
    }
}
