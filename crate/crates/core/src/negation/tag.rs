use serde::{Deserialize, Serialize};

use super::{NegationScope, NEG_PREFIX};
use crate::corpus::{Token, TokenStream};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    /// `[nx]`-prefixed when `negated`.
    pub surface: String,
    pub sentence_index: usize,
    pub position: usize,
    pub negated: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedTokenStream {
    pub tokens: Vec<TaggedToken>,
    pub source_len: usize,
}

impl TaggedTokenStream {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> + '_ {
        self.tokens.iter().map(|t| t.surface.as_str())
    }

    /// Removes the negation prefixes, recovering the untagged stream.
    pub fn strip(&self) -> TokenStream {
        TokenStream {
            tokens: self
                .tokens
                .iter()
                .map(|t| Token {
                    surface: if t.negated {
                        strip_prefix(&t.surface).to_string()
                    } else {
                        t.surface.clone()
                    },
                    sentence_index: t.sentence_index,
                    position: t.position,
                })
                .collect(),
            source_len: self.source_len,
        }
    }
}

pub fn strip_prefix(surface: &str) -> &str {
    surface.strip_prefix(NEG_PREFIX).unwrap_or(surface)
}

/// Per-position marks over the source token sequence.
struct Marks {
    in_scope: Vec<bool>,
    is_trigger: Vec<bool>,
}

impl Marks {
    fn new(len: usize, scopes: &[NegationScope]) -> Self {
        let len = scopes
            .iter()
            .flat_map(|s| [s.scope_span.end, s.trigger_span.end])
            .fold(len, usize::max);
        let mut marks = Self {
            in_scope: vec![false; len],
            is_trigger: vec![false; len],
        };
        for s in scopes {
            marks.in_scope[s.scope_span.start..s.scope_span.end].fill(true);
            if s.trigger_span.start < s.trigger_span.end {
                marks.is_trigger[s.trigger_span.start..s.trigger_span.end].fill(true);
            }
        }
        marks
    }
}

/// Prefixes every token whose position lies inside a scope with `[nx]`.
/// Trigger tokens stay untagged.
pub fn tag_tokens(stream: &TokenStream, scopes: &[NegationScope]) -> Result<TaggedTokenStream> {
    for s in scopes {
        let span = s.scope_span;
        if span.start >= span.end || span.end > stream.source_len {
            return Err(Error::ScopeOutOfRange {
                start: span.start,
                end: span.end,
                len: stream.source_len,
            });
        }
    }
    let marks = Marks::new(stream.source_len, scopes);
    let tokens = stream
        .tokens
        .iter()
        .map(|t| {
            let negated = marks.in_scope.get(t.position).copied().unwrap_or(false);
            TaggedToken {
                surface: if negated {
                    format!("{NEG_PREFIX}{}", t.surface)
                } else {
                    t.surface.clone()
                },
                sentence_index: t.sentence_index,
                position: t.position,
                negated,
            }
        })
        .collect();
    Ok(TaggedTokenStream {
        tokens,
        source_len: stream.source_len,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSplit {
    pub positive: Vec<String>,
    pub negated: Vec<String>,
    /// Trigger tokens still present in the stream (not stopwords).
    pub triggers: Vec<String>,
}

/// Partitions the stream into terms outside any scope, terms inside a
/// scope, and trigger tokens.
pub fn split_query_terms(stream: &TokenStream, scopes: &[NegationScope]) -> TermSplit {
    let marks = Marks::new(stream.source_len, scopes);
    let mut split = TermSplit::default();
    for t in &stream.tokens {
        let surface = t.surface.clone();
        if marks.is_trigger.get(t.position).copied().unwrap_or(false) {
            split.triggers.push(surface);
        } else if marks.in_scope.get(t.position).copied().unwrap_or(false) {
            split.negated.push(surface);
        } else {
            split.positive.push(surface);
        }
    }
    split
}
