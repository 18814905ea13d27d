//! Rule-based negation cue and scope detection, and `[nx]` tagging of
//! negated tokens.

mod detect;
mod lexicon;
mod tag;

pub use detect::{detect_negations, detect_negations_with, ScopeExtent};
pub use lexicon::{PhraseKind, TriggerLexicon};
pub use tag::{split_query_terms, strip_prefix, tag_tokens, TaggedToken, TaggedTokenStream, TermSplit};

use serde::{Deserialize, Serialize};

/// Prefix carried by negated tokens in tagged streams and tagged queries.
pub const NEG_PREFIX: &str = "[nx]";

/// Half-open range `start..end` of document-wide token positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn contains(&self, position: usize) -> bool {
        self.start <= position && position < self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScopeKind {
    /// The trigger precedes its scope.
    Pre,
    /// The trigger follows its scope.
    Post,
}

/// A negation cue and the token span it negates, both inside one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegationScope {
    pub sentence_index: usize,
    pub trigger: String,
    pub trigger_span: Span,
    pub scope_span: Span,
    pub kind: ScopeKind,
}
