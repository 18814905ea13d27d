//! Baseline, filtering, score-combination and negation-tagging scoring.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{top_k, Field, Index, ScoredDoc, WeightedQuery};
use crate::querygen::QueryBundle;

/// Quadratic in the query length that sets the negated-query weight for
/// score combination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaPolynomial {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl BetaPolynomial {
    pub const DEFAULT: BetaPolynomial = BetaPolynomial {
        a: -0.0001638,
        b: 0.04631,
        c: -1.207,
    };

    /// Evaluated as written; the result is not clamped and is negative for
    /// short (and very long) queries.
    pub fn eval(&self, n_full: usize) -> f64 {
        let n = n_full as f64;
        self.a * n * n + self.b * n + self.c
    }
}

impl Default for BetaPolynomial {
    fn default() -> Self {
        Self::DEFAULT
    }
}

pub fn beta_adaptive(n_full: usize) -> f64 {
    BetaPolynomial::DEFAULT.eval(n_full)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    Baseline,
    Filtering,
    ScoreCombination,
    NegationTagging,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 4] = [
        StrategyKind::Baseline,
        StrategyKind::Filtering,
        StrategyKind::ScoreCombination,
        StrategyKind::NegationTagging,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Baseline => "baseline",
            StrategyKind::Filtering => "filtering",
            StrategyKind::ScoreCombination => "score_combination",
            StrategyKind::NegationTagging => "negation_tagging",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            StrategyKind::Baseline => "Baseline",
            StrategyKind::Filtering => "Negation Filtering",
            StrategyKind::ScoreCombination => "Score Combination",
            StrategyKind::NegationTagging => "Negation Tagging",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "baseline" => Ok(Self::Baseline),
            "filtering" | "negation_filtering" => Ok(Self::Filtering),
            "score_combination" | "combination" => Ok(Self::ScoreCombination),
            "negation_tagging" | "tagging" => Ok(Self::NegationTagging),
            _ => Err(Error::InvalidArgument(format!(
                "unknown strategy `{s}` (expected baseline, filtering, score_combination or negation_tagging)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyParams {
    /// Fixed combination weight; the adaptive polynomial is used when unset.
    pub beta_override: Option<f64>,
    /// Weight of the untagged expansion terms in negation tagging.
    pub tagging_expansion_weight: f64,
    pub beta_polynomial: BetaPolynomial,
}

impl Default for StrategyParams {
    fn default() -> Self {
        Self {
            beta_override: None,
            tagging_expansion_weight: 0.3,
            beta_polynomial: BetaPolynomial::DEFAULT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Strategy {
    pub kind: StrategyKind,
    pub params: StrategyParams,
}

impl Strategy {
    pub fn new(kind: StrategyKind) -> Self {
        Self {
            kind,
            params: StrategyParams::default(),
        }
    }

    pub fn with_params(kind: StrategyKind, params: StrategyParams) -> Result<Self> {
        let w = params.tagging_expansion_weight;
        if !(w.is_finite() && w >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "expansion weight must be finite and non-negative, got {w}"
            )));
        }
        if let Some(beta) = params.beta_override {
            if !beta.is_finite() {
                return Err(Error::InvalidArgument(format!("beta must be finite, got {beta}")));
            }
        }
        Ok(Self { kind, params })
    }

    /// The combination weight used for this bundle.
    pub fn beta(&self, bundle: &QueryBundle) -> f64 {
        self.params
            .beta_override
            .unwrap_or_else(|| self.params.beta_polynomial.eval(bundle.n_full))
    }

    /// Single tagged-field query: tagged terms with weight 1 plus the
    /// untagged negated terms with the expansion weight.
    pub fn tagging_query(&self, bundle: &QueryBundle) -> WeightedQuery {
        let mut q = bundle.q_tagged.clone();
        let w = self.params.tagging_expansion_weight;
        if w > 0.0 {
            for (term, weight) in &bundle.q_neg.terms {
                q.push(term.clone(), weight * w);
            }
        }
        q
    }

    pub fn score(&self, bundle: &QueryBundle, index: &Index, doc_id: &str) -> Result<f64> {
        match self.kind {
            StrategyKind::Baseline => score_baseline(bundle, index, doc_id),
            StrategyKind::Filtering => score_filtering(bundle, index, doc_id),
            StrategyKind::ScoreCombination => {
                if !bundle.has_negation() {
                    return score_baseline(bundle, index, doc_id);
                }
                let full = index.bm25_score(&bundle.q_full, doc_id)?;
                let neg = index.bm25_score(&bundle.q_neg, doc_id)?;
                Ok(full - self.beta(bundle) * neg)
            }
            StrategyKind::NegationTagging => {
                if !bundle.has_negation() {
                    return score_baseline(bundle, index, doc_id);
                }
                index.bm25_score(&self.tagging_query(bundle), doc_id)
            }
        }
    }

    /// Ranks documents by this strategy's score, best first, ties broken by
    /// doc id. Score combination ranks every document matching the full or
    /// the negated query, including those that end up with a non-positive
    /// score; the other strategies return only positively scored documents.
    pub fn run(&self, bundle: &QueryBundle, index: &Index, k: usize) -> Vec<ScoredDoc> {
        if !bundle.has_negation() {
            return index.search(&bundle.q_full, k);
        }
        match self.kind {
            StrategyKind::Baseline => index.search(&bundle.q_full, k),
            StrategyKind::Filtering => index.search(&bundle.q_pos, k),
            StrategyKind::NegationTagging => index.search(&self.tagging_query(bundle), k),
            StrategyKind::ScoreCombination => {
                let beta = self.beta(bundle);
                let terms = bundle.q_full.term_surfaces().chain(bundle.q_neg.term_surfaces());
                let candidates = index.matching_numbers(Field::Plain, terms);
                let scored = candidates
                    .into_iter()
                    .map(|d| {
                        let full = index.score_number(&bundle.q_full, d);
                        let neg = index.score_number(&bundle.q_neg, d);
                        index.scored(d, full - beta * neg)
                    })
                    .collect();
                top_k(scored, k)
            }
        }
    }
}

pub fn score_baseline(bundle: &QueryBundle, index: &Index, doc_id: &str) -> Result<f64> {
    index.bm25_score(&bundle.q_full, doc_id)
}

pub fn score_filtering(bundle: &QueryBundle, index: &Index, doc_id: &str) -> Result<f64> {
    index.bm25_score(&bundle.q_pos, doc_id)
}

pub fn score_combination(bundle: &QueryBundle, index: &Index, doc_id: &str, params: StrategyParams) -> Result<f64> {
    Strategy::with_params(StrategyKind::ScoreCombination, params)?.score(bundle, index, doc_id)
}

pub fn score_tagging(bundle: &QueryBundle, index: &Index, doc_id: &str, params: StrategyParams) -> Result<f64> {
    Strategy::with_params(StrategyKind::NegationTagging, params)?.score(bundle, index, doc_id)
}

pub fn run_strategy(strategy: &Strategy, bundle: &QueryBundle, index: &Index, k: usize) -> Vec<ScoredDoc> {
    strategy.run(bundle, index, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::Analyzer;
    use crate::corpus::{RawDocument, Topic};
    use crate::index::{index_collection, Bm25Params};
    use crate::querygen::build_bundle;

    fn index_of(docs: &[(&str, &str)]) -> Index {
        let docs = docs.iter().map(|(id, body)| Ok(RawDocument::new(*id, "", *body)));
        index_collection(docs, &Analyzer::default(), Bm25Params::default()).unwrap()
    }

    fn bundle(text: &str) -> QueryBundle {
        build_bundle(&Topic::new("t", text), &Analyzer::default()).unwrap()
    }

    #[test]
    fn beta_polynomial_values() {
        assert!((beta_adaptive(57) - 0.90048).abs() < 1e-5);
        assert_eq!(beta_adaptive(0), -1.207);
        assert!((beta_adaptive(10) - -0.76028).abs() < 1e-12);
    }

    #[test]
    fn beta_roots_bracket_positive_region() {
        // positive only for n_full in 30..=253
        assert!(beta_adaptive(29) < 0.0 && beta_adaptive(30) > 0.0);
        assert!(beta_adaptive(253) > 0.0 && beta_adaptive(254) < 0.0);
    }

    #[test]
    fn strategy_names_round_trip() {
        for k in StrategyKind::ALL {
            assert_eq!(k.name().parse::<StrategyKind>().unwrap(), k);
        }
        assert!("rocchio".parse::<StrategyKind>().is_err());
    }

    #[test]
    fn negation_free_strategies_agree() {
        let idx = index_of(&[("a", "fever and cough"), ("b", "cough"), ("c", "rash")]);
        let b = bundle("Fever with cough.");
        let base = Strategy::new(StrategyKind::Baseline).run(&b, &idx, 10);
        for kind in StrategyKind::ALL {
            let s = Strategy::new(kind);
            assert_eq!(s.run(&b, &idx, 10), base, "{kind}");
            for id in ["a", "b", "c"] {
                assert_eq!(s.score(&b, &idx, id).unwrap(), score_baseline(&b, &idx, id).unwrap());
            }
        }
    }

    #[test]
    fn filtering_ignores_negated_terms() {
        let idx = index_of(&[("a", "smoking"), ("b", "cough")]);
        let b = bundle("Cough. Denies smoking.");
        assert_eq!(score_filtering(&b, &idx, "a").unwrap(), 0.0);
        assert!(score_filtering(&b, &idx, "b").unwrap() > 0.0);
        let all_negated = bundle("She denies smoking, diabetes, or a family history of heart disease.");
        assert_eq!(score_filtering(&all_negated, &idx, "a").unwrap(), 0.0);
        assert!(Strategy::new(StrategyKind::Filtering)
            .run(&all_negated, &idx, 10)
            .is_empty());
    }

    #[test]
    fn combination_demotes_negated_only_documents() {
        let idx = index_of(&[("pos", "cough"), ("neg", "smoking"), ("none", "rash")]);
        let b = bundle("Cough. Denies smoking.");
        let params = StrategyParams {
            beta_override: Some(0.5),
            ..StrategyParams::default()
        };
        let strat = Strategy::with_params(StrategyKind::ScoreCombination, params).unwrap();
        let neg_score = strat.score(&b, &idx, "neg").unwrap();
        let plain_neg = idx.bm25_score(&b.q_neg, "neg").unwrap();
        // q_full and q_neg both match "smoking" once: s - 0.5 s
        assert!((neg_score - 0.5 * plain_neg).abs() < 1e-12);
        let ranked = strat.run(&b, &idx, 10);
        let ids: Vec<_> = ranked.iter().map(|d| d.doc_id.as_str()).collect();
        assert_eq!(ids, ["pos", "neg"]);

        let zero = StrategyParams {
            beta_override: Some(0.0),
            ..params
        };
        for id in ["pos", "neg", "none"] {
            assert_eq!(
                score_combination(&b, &idx, id, zero).unwrap(),
                score_baseline(&b, &idx, id).unwrap()
            );
        }
    }

    #[test]
    fn combination_can_go_negative() {
        let idx = index_of(&[("pos", "cough fever"), ("neg", "smoking smoking"), ("x", "rash")]);
        let b = bundle("Cough. Denies smoking.");
        // q_neg is a sub-multiset of q_full, so a document matching only
        // negated terms scores (1 - beta) * S(q_neg): negative iff beta > 1
        let s_neg = idx.bm25_score(&b.q_neg, "neg").unwrap();
        for beta in [0.5, 1.0, 1.5, -0.5] {
            let params = StrategyParams {
                beta_override: Some(beta),
                ..StrategyParams::default()
            };
            let s = score_combination(&b, &idx, "neg", params).unwrap();
            assert!((s - (1.0 - beta) * s_neg).abs() < 1e-12);
            assert_eq!(s < 0.0, beta > 1.0);
        }
        let params = StrategyParams {
            beta_override: Some(1.5),
            ..StrategyParams::default()
        };
        let ranked = Strategy::with_params(StrategyKind::ScoreCombination, params)
            .unwrap()
            .run(&b, &idx, 10);
        let ids: Vec<_> = ranked.iter().map(|d| d.doc_id.as_str()).collect();
        assert_eq!(ids, ["pos", "neg"]);
        assert!(ranked[1].score < 0.0);
    }

    #[test]
    fn invalid_params_rejected() {
        let bad = StrategyParams {
            tagging_expansion_weight: -0.1,
            ..StrategyParams::default()
        };
        assert!(Strategy::with_params(StrategyKind::NegationTagging, bad).is_err());
        let nan = StrategyParams {
            beta_override: Some(f64::NAN),
            ..StrategyParams::default()
        };
        assert!(Strategy::with_params(StrategyKind::ScoreCombination, nan).is_err());
    }
}
