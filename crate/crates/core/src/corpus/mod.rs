//! Document and topic ingestion, sentence splitting and tokenization.

mod load;
mod stopwords;
pub(crate) mod tokenize;

pub use load::{load_collection, load_topics, CollectionFormat, CollectionReader};
pub use stopwords::Stopwords;
pub use tokenize::{split_sentences, split_sentences_with, tokenize, TokenPattern, TokenizerConfig};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDocument {
    pub doc_id: String,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub body: String,
}

impl RawDocument {
    pub fn new(doc_id: impl Into<String>, title: impl Into<String>, body: impl Into<String>) -> Self {
        Self {
            doc_id: doc_id.into(),
            title: title.into(),
            body: body.into(),
        }
    }

    /// Text that gets indexed: title and body joined by a single space.
    pub fn text(&self) -> String {
        format!("{} {}", self.title, self.body)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topic {
    pub topic_id: String,
    pub description: String,
}

impl Topic {
    pub fn new(topic_id: impl Into<String>, description: impl Into<String>) -> Self {
        Self {
            topic_id: topic_id.into(),
            description: description.into(),
        }
    }
}

/// A lowercase token. `position` indexes the document-wide token sequence
/// *before* stopword removal, so it lines up with negation scope spans.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub sentence_index: usize,
    pub position: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenStream {
    pub tokens: Vec<Token>,
    /// Number of tokens in the source text before stopword removal.
    pub source_len: usize,
}

impl TokenStream {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> + '_ {
        self.tokens.iter().map(|t| t.surface.as_str())
    }
}

/// One sentence of a text. `start..end` is the byte range of the sentence
/// (trimmed, without its terminating delimiter) and `tokens` is the full,
/// pre-stopword token sequence of that range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub index: usize,
    pub start: usize,
    pub end: usize,
    pub tokens: Vec<Token>,
}

impl Sentence {
    /// Position of the first token, or `None` for a sentence without tokens.
    pub fn first_position(&self) -> Option<usize> {
        self.tokens.first().map(|t| t.position)
    }
}
