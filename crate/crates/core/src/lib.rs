//! Negation-aware ranked retrieval.
//!
//! The pipeline runs in five stages:
//!
//! - [`corpus`] ingests documents and topics and turns text into sentences
//!   and stopword-free token streams.
//! - [`negation`] finds negation cues and their scopes with a rule lexicon
//!   and produces `[nx]`-tagged token streams.
//! - [`index`] keeps a plain and a tagged BM25 field for every document.
//! - [`querygen`] and [`ranking`] turn a topic into its four query variants
//!   and score documents with the baseline, filtering, score-combination and
//!   negation-tagging strategies.
//! - [`evalkit`] reads and writes TREC qrels/run files, computes P@10, nDCG,
//!   infAP and R-precision, and compares topics with and without negations.
//!
//! [`analysis::Analyzer`] ties the tokenizer and the negation lexicon
//! together so documents and queries are always processed identically.

pub mod analysis;
pub mod corpus;
pub mod error;
pub mod evalkit;
pub mod index;
pub mod negation;
pub mod querygen;
pub mod ranking;

pub use analysis::{AnalyzedText, Analyzer};
pub use error::{Error, Result};

/// Version of this library, reported alongside lexicon and stopword versions.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
