//! In-memory inverted index with a plain and a `[nx]`-tagged field per
//! document, scored with BM25.

mod bm25;
mod snapshot;

pub use bm25::{idf, tf_part, Bm25Params};
pub use snapshot::{read_snapshot, write_snapshot, SNAPSHOT_MAGIC};

use std::cmp::Ordering;
use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::Analyzer;
use crate::corpus::{RawDocument, TokenStream};
use crate::error::{Error, Result};
use crate::negation::TaggedTokenStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Plain,
    Tagged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Posting {
    pub doc: u32,
    pub tf: u32,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub(crate) struct FieldIndex {
    /// Postings are sorted by internal document number.
    pub(crate) postings: HashMap<String, Vec<Posting>>,
    pub(crate) doc_lengths: Vec<u32>,
    pub(crate) avg_doc_length: f64,
}

impl FieldIndex {
    fn add<'a>(&mut self, doc: u32, surfaces: impl Iterator<Item = &'a str>) {
        let mut counts: HashMap<&str, u32> = HashMap::new();
        let mut len = 0u32;
        for s in surfaces {
            *counts.entry(s).or_default() += 1;
            len += 1;
        }
        let mut terms: Vec<_> = counts.into_iter().collect();
        terms.sort_unstable();
        for (term, tf) in terms {
            self.postings
                .entry(term.to_string())
                .or_default()
                .push(Posting { doc, tf });
        }
        self.doc_lengths.push(len);
    }

    pub(crate) fn finish(&mut self) {
        let total: u64 = self.doc_lengths.iter().map(|&l| l as u64).sum();
        self.avg_doc_length = if self.doc_lengths.is_empty() {
            0.0
        } else {
            total as f64 / self.doc_lengths.len() as f64
        };
    }

    fn tf(&self, term: &str, doc: u32) -> u32 {
        self.postings
            .get(term)
            .and_then(|p| p.binary_search_by_key(&doc, |x| x.doc).ok().map(|i| p[i].tf))
            .unwrap_or(0)
    }
}

/// Query terms with per-term weights against one field. Duplicate terms are
/// kept and each occurrence contributes separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedQuery {
    pub field: Field,
    pub terms: Vec<(String, f64)>,
}

impl WeightedQuery {
    pub fn new(field: Field) -> Self {
        Self {
            field,
            terms: Vec::new(),
        }
    }

    /// Every term with weight 1.
    pub fn uniform<I, S>(field: Field, terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut q = Self::new(field);
        for t in terms {
            q.push(t, 1.0);
        }
        q
    }

    /// # Panics
    /// If `weight` is not finite and positive.
    pub fn push(&mut self, term: impl Into<String>, weight: f64) {
        assert!(
            weight.is_finite() && weight > 0.0,
            "query weight must be positive, got {weight}"
        );
        self.terms.push((term.into(), weight));
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_surfaces(&self) -> impl Iterator<Item = &str> + '_ {
        self.terms.iter().map(|(t, _)| t.as_str())
    }

    /// Same terms with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut q = Self::new(self.field);
        for (t, w) in &self.terms {
            q.push(t.clone(), w * factor);
        }
        q
    }

    pub fn on_field(&self, field: Field) -> Self {
        Self {
            field,
            terms: self.terms.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredDoc {
    pub doc_id: String,
    pub score: f64,
}

/// Descending score, ascending doc id on ties.
pub fn compare_scored(a: &ScoredDoc, b: &ScoredDoc) -> Ordering {
    b.score.total_cmp(&a.score).then_with(|| a.doc_id.cmp(&b.doc_id))
}

/// Sorts by [`compare_scored`] and keeps the first `k`.
pub fn top_k(mut docs: Vec<ScoredDoc>, k: usize) -> Vec<ScoredDoc> {
    docs.sort_by(compare_scored);
    docs.truncate(k);
    docs
}

/// One document ready for indexing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedDocument {
    pub doc_id: String,
    pub plain: TokenStream,
    pub tagged: TaggedTokenStream,
}

impl From<(RawDocument, TokenStream, TaggedTokenStream)> for IndexedDocument {
    fn from((doc, plain, tagged): (RawDocument, TokenStream, TaggedTokenStream)) -> Self {
        Self {
            doc_id: doc.doc_id,
            plain,
            tagged,
        }
    }
}

/// Immutable dual-field BM25 index.
#[derive(Debug, Clone)]
pub struct Index {
    pub(crate) doc_ids: Vec<String>,
    pub(crate) lookup: HashMap<String, u32>,
    pub(crate) plain: FieldIndex,
    pub(crate) tagged: FieldIndex,
    pub(crate) params: Bm25Params,
    pub(crate) analyzer: Option<Analyzer>,
}

/// Builds an index from pre-analyzed documents in the given order.
pub fn build_index<I, D>(docs: I, params: Bm25Params) -> Result<Index>
where
    I: IntoIterator<Item = D>,
    D: Into<IndexedDocument>,
{
    let mut index = Index {
        doc_ids: Vec::new(),
        lookup: HashMap::new(),
        plain: FieldIndex::default(),
        tagged: FieldIndex::default(),
        params,
        analyzer: None,
    };
    for doc in docs {
        let doc = doc.into();
        let n = index.doc_ids.len() as u32;
        if index.lookup.insert(doc.doc_id.clone(), n).is_some() {
            return Err(Error::DuplicateId(doc.doc_id));
        }
        index.plain.add(n, doc.plain.surfaces());
        index.tagged.add(n, doc.tagged.surfaces());
        index.doc_ids.push(doc.doc_id);
    }
    index.plain.finish();
    index.tagged.finish();
    Ok(index)
}

/// Analyzes raw documents in parallel and indexes them in input order. The
/// analyzer is kept with the index so queries are processed the same way.
pub fn index_collection<I>(docs: I, analyzer: &Analyzer, params: Bm25Params) -> Result<Index>
where
    I: IntoIterator<Item = Result<RawDocument>>,
{
    let raw: Vec<RawDocument> = docs.into_iter().collect::<Result<_>>()?;
    let analyzed: Vec<IndexedDocument> = raw
        .into_par_iter()
        .map(|doc| {
            let a = analyzer.analyze(&doc.text());
            IndexedDocument {
                doc_id: doc.doc_id,
                plain: a.stream,
                tagged: a.tagged,
            }
        })
        .collect();
    let mut index = build_index(analyzed, params)?;
    index.analyzer = Some(analyzer.clone());
    Ok(index)
}

impl Index {
    fn field(&self, field: Field) -> &FieldIndex {
        match field {
            Field::Plain => &self.plain,
            Field::Tagged => &self.tagged,
        }
    }

    pub fn doc_count(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn params(&self) -> Bm25Params {
        self.params
    }

    /// The analyzer the collection was indexed with, if known.
    pub fn analyzer(&self) -> Option<&Analyzer> {
        self.analyzer.as_ref()
    }

    pub fn set_analyzer(&mut self, analyzer: Analyzer) {
        self.analyzer = Some(analyzer);
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn contains_doc(&self, doc_id: &str) -> bool {
        self.lookup.contains_key(doc_id)
    }

    pub fn avg_doc_length(&self, field: Field) -> f64 {
        self.field(field).avg_doc_length
    }

    pub fn doc_length(&self, field: Field, doc_id: &str) -> Option<u32> {
        let n = *self.lookup.get(doc_id)?;
        Some(self.field(field).doc_lengths[n as usize])
    }

    pub fn doc_freq(&self, field: Field, term: &str) -> usize {
        self.field(field).postings.get(term).map_or(0, Vec::len)
    }

    /// `(doc_id, tf)` pairs for a term, in index order.
    pub fn postings(&self, field: Field, term: &str) -> Vec<(&str, u32)> {
        self.field(field)
            .postings
            .get(term)
            .map(|p| {
                p.iter()
                    .map(|x| (self.doc_ids[x.doc as usize].as_str(), x.tf))
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn vocabulary_size(&self, field: Field) -> usize {
        self.field(field).postings.len()
    }

    pub fn idf(&self, field: Field, term: &str) -> f64 {
        idf(self.doc_count(), self.doc_freq(field, term))
    }

    pub(crate) fn doc_number(&self, doc_id: &str) -> Result<u32> {
        self.lookup
            .get(doc_id)
            .copied()
            .ok_or_else(|| Error::UnknownDocument(doc_id.to_string()))
    }

    #[inline]
    fn contribution(&self, field: &FieldIndex, term: &str, weight: f64, tf: u32, doc: u32) -> f64 {
        let df = field.postings.get(term).map_or(0, Vec::len);
        weight
            * idf(self.doc_count(), df)
            * tf_part(tf, field.doc_lengths[doc as usize], field.avg_doc_length, self.params)
    }

    pub(crate) fn score_number(&self, query: &WeightedQuery, doc: u32) -> f64 {
        let field = self.field(query.field);
        let mut score = 0.0;
        for (term, weight) in &query.terms {
            let tf = field.tf(term, doc);
            if tf > 0 {
                score += self.contribution(field, term, *weight, tf, doc);
            }
        }
        score
    }

    /// BM25 score of one document; terms absent from it contribute nothing.
    pub fn bm25_score(&self, query: &WeightedQuery, doc_id: &str) -> Result<f64> {
        Ok(self.score_number(query, self.doc_number(doc_id)?))
    }

    /// Internal numbers of documents containing at least one of the terms,
    /// ascending.
    pub(crate) fn matching_numbers<'a>(&self, field: Field, terms: impl Iterator<Item = &'a str>) -> Vec<u32> {
        let field = self.field(field);
        let mut docs: Vec<u32> = terms
            .filter_map(|t| field.postings.get(t))
            .flat_map(|p| p.iter().map(|x| x.doc))
            .collect();
        docs.sort_unstable();
        docs.dedup();
        docs
    }

    pub(crate) fn scored(&self, doc: u32, score: f64) -> ScoredDoc {
        ScoredDoc {
            doc_id: self.doc_ids[doc as usize].clone(),
            score,
        }
    }

    /// Term-at-a-time BM25 retrieval. Only documents with a positive score
    /// are returned, so the result can be shorter than `k`.
    pub fn search(&self, query: &WeightedQuery, k: usize) -> Vec<ScoredDoc> {
        let field = self.field(query.field);
        let mut acc: HashMap<u32, f64> = HashMap::new();
        for (term, weight) in &query.terms {
            let Some(postings) = field.postings.get(term) else {
                continue;
            };
            for p in postings {
                *acc.entry(p.doc).or_insert(0.0) += self.contribution(field, term, *weight, p.tf, p.doc);
            }
        }
        let hits = acc
            .into_iter()
            .filter(|&(_, s)| s > 0.0)
            .map(|(d, s)| self.scored(d, s))
            .collect();
        top_k(hits, k)
    }
}
