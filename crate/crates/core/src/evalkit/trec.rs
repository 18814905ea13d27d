use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::topic_order;
use crate::error::{Error, Result};
use crate::index::ScoredDoc;

/// Relevance judgments: `(topic, doc) -> grade`. Unjudged pairs are absent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Qrels {
    judgments: BTreeMap<String, HashMap<String, u32>>,
}

impl Qrels {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a judgment; a second, different grade for the same pair is
    /// rejected.
    pub fn insert(&mut self, topic: impl Into<String>, doc: impl Into<String>, grade: u32) -> Result<()> {
        let topic = topic.into();
        let doc = doc.into();
        let docs = self.judgments.entry(topic.clone()).or_default();
        match docs.get(&doc) {
            Some(&g) if g != grade => Err(Error::InvalidArgument(format!(
                "conflicting grades {g} and {grade} for topic {topic}, document {doc}"
            ))),
            _ => {
                docs.insert(doc, grade);
                Ok(())
            }
        }
    }

    pub fn grade(&self, topic: &str, doc: &str) -> Option<u32> {
        self.judgments.get(topic)?.get(doc).copied()
    }

    pub fn topic(&self, topic: &str) -> Option<&HashMap<String, u32>> {
        self.judgments.get(topic)
    }

    /// Topic ids in natural order.
    pub fn topics(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = self.judgments.keys().map(String::as_str).collect();
        ids.sort_by(|a, b| topic_order(a, b));
        ids
    }

    pub fn contains_topic(&self, topic: &str) -> bool {
        self.judgments.contains_key(topic)
    }

    /// Number of documents with grade >= 1.
    pub fn num_relevant(&self, topic: &str) -> usize {
        self.topic(topic)
            .map_or(0, |docs| docs.values().filter(|&&g| g >= 1).count())
    }

    pub fn len(&self) -> usize {
        self.judgments.values().map(HashMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Reads `topic 0 docid grade` lines.
pub fn read_qrels(path: impl AsRef<Path>) -> Result<Qrels> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_qrels(&text, &path.display().to_string())
}

pub(crate) fn parse_qrels(text: &str, name: &str) -> Result<Qrels> {
    let mut qrels = Qrels::new();
    for (i, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 4 {
            return Err(Error::parse(
                name,
                i + 1,
                format!("expected 4 fields, found {}", fields.len()),
            ));
        }
        let grade: i64 = fields[3]
            .parse()
            .map_err(|_| Error::parse(name, i + 1, format!("invalid grade `{}`", fields[3])))?;
        let grade =
            u32::try_from(grade).map_err(|_| Error::parse(name, i + 1, format!("grade {grade} is out of range")))?;
        qrels
            .insert(fields[0], fields[2], grade)
            .map_err(|e| Error::parse(name, i + 1, e.to_string()))?;
    }
    Ok(qrels)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedDoc {
    pub doc_id: String,
    pub rank: usize,
    pub score: f64,
}

/// Ranked lists per topic. Ranks are dense from 1, scores non-increasing,
/// and a document appears at most once per topic.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub run_tag: String,
    pub topics: BTreeMap<String, Vec<RankedDoc>>,
}

impl RunResult {
    pub fn new(run_tag: impl Into<String>) -> Self {
        Self {
            run_tag: run_tag.into(),
            topics: BTreeMap::new(),
        }
    }

    /// Stores an already ranked list for a topic, numbering ranks from 1.
    pub fn insert_ranking(&mut self, topic: impl Into<String>, docs: Vec<ScoredDoc>) {
        let ranked = docs
            .into_iter()
            .enumerate()
            .map(|(i, d)| RankedDoc {
                doc_id: d.doc_id,
                rank: i + 1,
                score: d.score,
            })
            .collect();
        self.topics.insert(topic.into(), ranked);
    }

    pub fn ranking(&self, topic: &str) -> Vec<&str> {
        self.topics
            .get(topic)
            .map(|docs| docs.iter().map(|d| d.doc_id.as_str()).collect())
            .unwrap_or_default()
    }

    /// Serializes as `topic Q0 docid rank score tag` lines, topics in
    /// natural order.
    pub fn to_trec(&self) -> String {
        let mut topics: Vec<&String> = self.topics.keys().collect();
        topics.sort_by(|a, b| topic_order(a, b));
        let mut out = String::new();
        for topic in topics {
            for d in &self.topics[topic] {
                let _ = writeln!(out, "{topic} Q0 {} {} {} {}", d.doc_id, d.rank, d.score, self.run_tag);
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        for (topic, docs) in &self.topics {
            let mut seen = HashSet::new();
            for (i, d) in docs.iter().enumerate() {
                if d.rank != i + 1 {
                    return Err(Error::InvalidArgument(format!(
                        "topic {topic}: ranks are not dense from 1 (found {} at position {})",
                        d.rank,
                        i + 1
                    )));
                }
                if i > 0 && d.score > docs[i - 1].score {
                    return Err(Error::InvalidArgument(format!(
                        "topic {topic}: score increases at rank {}",
                        d.rank
                    )));
                }
                if !seen.insert(d.doc_id.as_str()) {
                    return Err(Error::InvalidArgument(format!(
                        "topic {topic}: document {} is ranked twice",
                        d.doc_id
                    )));
                }
            }
        }
        Ok(())
    }
}

pub fn write_run(run: &RunResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, run.to_trec()).map_err(|e| Error::io(path, e))
}

pub fn read_run(path: impl AsRef<Path>) -> Result<RunResult> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_run(&text, &path.display().to_string())
}

pub(crate) fn parse_run(text: &str, name: &str) -> Result<RunResult> {
    let mut run: Option<RunResult> = None;
    for (i, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let err = |msg: String| Error::parse(name, i + 1, msg);
        if fields.len() != 6 {
            return Err(err(format!("expected 6 fields, found {}", fields.len())));
        }
        let rank: usize = fields[3]
            .parse()
            .map_err(|_| err(format!("invalid rank `{}`", fields[3])))?;
        let score: f64 = fields[4]
            .parse()
            .ok()
            .filter(|s: &f64| s.is_finite())
            .ok_or_else(|| err(format!("invalid score `{}`", fields[4])))?;
        let run = run.get_or_insert_with(|| RunResult::new(fields[5]));
        if run.run_tag != fields[5] {
            return Err(err(format!("run tag `{}` differs from `{}`", fields[5], run.run_tag)));
        }
        run.topics.entry(fields[0].to_string()).or_default().push(RankedDoc {
            doc_id: fields[2].to_string(),
            rank,
            score,
        });
    }
    let mut run = run.unwrap_or_default();
    for docs in run.topics.values_mut() {
        docs.sort_by_key(|d| d.rank);
    }
    run.validate().map_err(|e| Error::parse(name, 0, e.to_string()))?;
    Ok(run)
}

/// Pooled documents per topic for the sampled infAP estimator. A pooled
/// document missing from the qrels was pooled but not sampled for judging.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct JudgmentPool {
    topics: HashMap<String, HashSet<String>>,
}

impl JudgmentPool {
    pub fn insert(&mut self, topic: impl Into<String>, doc: impl Into<String>) {
        self.topics.entry(topic.into()).or_default().insert(doc.into());
    }

    pub fn topic(&self, topic: &str) -> Option<&HashSet<String>> {
        self.topics.get(topic)
    }
}

/// Reads a pool sidecar: `topic docid` per line.
pub fn read_pool(path: impl AsRef<Path>) -> Result<JudgmentPool> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut pool = JudgmentPool::default();
    for (i, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            [] => continue,
            [topic, doc] => pool.insert(*topic, *doc),
            _ => return Err(Error::parse(&name, i + 1, "expected `topic docid`")),
        }
    }
    Ok(pool)
}
