//! The four query variants of a topic: full, positive-only, negated-only
//! and `[nx]`-tagged.

use serde::{Deserialize, Serialize};

use crate::analysis::Analyzer;
use crate::corpus::Topic;
use crate::error::{Error, Result};
use crate::index::{Field, WeightedQuery};
use crate::negation::{split_query_terms, NegationScope};

/// Which tokens `n_full` and `n_neg` count. Duplicates always count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TermCounting {
    /// Query terms after stopword and trigger removal.
    #[default]
    PostStopword,
    /// All non-trigger tokens before stopword removal.
    PreStopword,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryBundle {
    pub topic_id: String,
    pub q_full: WeightedQuery,
    pub q_pos: WeightedQuery,
    /// Negated terms, untagged, on the plain field.
    pub q_neg: WeightedQuery,
    pub q_tagged: WeightedQuery,
    pub n_full: usize,
    pub n_neg: usize,
    pub scopes: Vec<NegationScope>,
}

impl QueryBundle {
    pub fn has_negation(&self) -> bool {
        !self.q_neg.is_empty()
    }
}

pub fn build_bundle(topic: &Topic, analyzer: &Analyzer) -> Result<QueryBundle> {
    build_bundle_with(topic, analyzer, TermCounting::default())
}

/// Sentence split, scope detection, stopword removal, then the split into
/// positive and negated terms. Trigger tokens are dropped from every
/// variant.
pub fn build_bundle_with(topic: &Topic, analyzer: &Analyzer, counting: TermCounting) -> Result<QueryBundle> {
    if topic.description.trim().is_empty() {
        return Err(Error::EmptyDescription(topic.topic_id.clone()));
    }
    let analyzed = analyzer.analyze(&topic.description);
    let split = split_query_terms(&analyzed.stream, &analyzed.scopes);

    let mut q_full = WeightedQuery::new(Field::Plain);
    let mut q_pos = WeightedQuery::new(Field::Plain);
    let mut q_neg = WeightedQuery::new(Field::Plain);
    let mut q_tagged = WeightedQuery::new(Field::Tagged);
    for t in &analyzed.tagged.tokens {
        let is_trigger = analyzed.scopes.iter().any(|s| s.trigger_span.contains(t.position));
        if is_trigger {
            continue;
        }
        let plain = crate::negation::strip_prefix(&t.surface);
        q_full.push(plain, 1.0);
        q_tagged.push(t.surface.as_str(), 1.0);
        if t.negated {
            q_neg.push(plain, 1.0);
        } else {
            q_pos.push(plain, 1.0);
        }
    }
    debug_assert_eq!(q_pos.len(), split.positive.len());
    debug_assert_eq!(q_neg.len(), split.negated.len());

    let (n_full, n_neg) = match counting {
        TermCounting::PostStopword => (q_full.len(), q_neg.len()),
        TermCounting::PreStopword => {
            let tokens = analyzed.sentences.iter().flat_map(|s| s.tokens.iter());
            let (mut full, mut neg) = (0, 0);
            for t in tokens {
                if analyzed.scopes.iter().any(|s| s.trigger_span.contains(t.position)) {
                    continue;
                }
                full += 1;
                if analyzed.scopes.iter().any(|s| s.scope_span.contains(t.position)) {
                    neg += 1;
                }
            }
            (full, neg)
        }
    };

    Ok(QueryBundle {
        topic_id: topic.topic_id.clone(),
        q_full,
        q_pos,
        q_neg,
        q_tagged,
        n_full,
        n_neg,
        scopes: analyzed.scopes,
    })
}
