use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, Lines};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::OnceLock;
use std::vec;

use regex::Regex;
use serde::Deserialize;

use super::{RawDocument, Topic};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollectionFormat {
    /// One JSON object per line with `doc_id`, `title` and `body`.
    Jsonl,
    /// `<DOC><DOCNO>..</DOCNO><TITLE>..</TITLE><TEXT>..</TEXT></DOC>` blocks.
    TrecText,
    /// A directory of files; the file stem is the document id.
    PlainDir,
}

impl FromStr for CollectionFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" => Ok(Self::Jsonl),
            "trec-text" | "trectext" => Ok(Self::TrecText),
            "plain-dir" | "dir" => Ok(Self::PlainDir),
            other => Err(Error::InvalidArgument(format!(
                "unknown collection format `{other}` (expected jsonl, trec-text or plain-dir)"
            ))),
        }
    }
}

#[derive(Deserialize)]
struct JsonDocument {
    doc_id: String,
    #[serde(default)]
    title: String,
    #[serde(default)]
    body: String,
}

enum Source {
    Jsonl {
        lines: Lines<BufReader<File>>,
        line_no: usize,
    },
    TrecText {
        lines: Lines<BufReader<File>>,
        line_no: usize,
    },
    PlainDir {
        files: vec::IntoIter<PathBuf>,
    },
}

/// Streams the documents of a collection in file order, rejecting
/// duplicate ids.
pub struct CollectionReader {
    source: Source,
    name: String,
    seen: HashSet<String>,
    failed: bool,
}

pub fn load_collection(path: impl AsRef<Path>, format: CollectionFormat) -> Result<CollectionReader> {
    let path = path.as_ref();
    let open = || -> Result<Lines<BufReader<File>>> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Ok(BufReader::new(file).lines())
    };
    let source = match format {
        CollectionFormat::Jsonl => Source::Jsonl {
            lines: open()?,
            line_no: 0,
        },
        CollectionFormat::TrecText => Source::TrecText {
            lines: open()?,
            line_no: 0,
        },
        CollectionFormat::PlainDir => {
            let mut files = Vec::new();
            for entry in fs::read_dir(path).map_err(|e| Error::io(path, e))? {
                let entry = entry.map_err(|e| Error::io(path, e))?;
                let p = entry.path();
                if p.is_file() {
                    files.push(p);
                }
            }
            files.sort();
            Source::PlainDir {
                files: files.into_iter(),
            }
        }
    };
    Ok(CollectionReader {
        source,
        name: path.display().to_string(),
        seen: HashSet::new(),
        failed: false,
    })
}

impl CollectionReader {
    fn next_raw(&mut self) -> Option<Result<RawDocument>> {
        let name = &self.name;
        match &mut self.source {
            Source::Jsonl { lines, line_no } => loop {
                let line = match lines.next()? {
                    Ok(l) => l,
                    Err(e) => return Some(Err(Error::io(name.as_str(), e))),
                };
                *line_no += 1;
                if line.trim().is_empty() {
                    continue;
                }
                let parsed = serde_json::from_str::<JsonDocument>(&line)
                    .map_err(|e| Error::parse(name.as_str(), *line_no, e.to_string()))
                    .and_then(|d| {
                        if d.doc_id.is_empty() {
                            Err(Error::parse(name.as_str(), *line_no, "empty doc_id"))
                        } else {
                            Ok(RawDocument::new(d.doc_id, d.title, d.body))
                        }
                    });
                return Some(parsed);
            },
            Source::TrecText { lines, line_no } => next_trec_doc(lines, line_no, name),
            Source::PlainDir { files } => {
                let path = files.next()?;
                let doc_id = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                Some(
                    fs::read_to_string(&path)
                        .map_err(|e| Error::io(&path, e))
                        .map(|body| RawDocument::new(doc_id, "", body)),
                )
            }
        }
    }
}

impl Iterator for CollectionReader {
    type Item = Result<RawDocument>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let item = self.next_raw()?.and_then(|doc| {
            if self.seen.insert(doc.doc_id.clone()) {
                Ok(doc)
            } else {
                Err(Error::DuplicateId(doc.doc_id))
            }
        });
        self.failed = item.is_err();
        Some(item)
    }
}

fn next_trec_doc(lines: &mut Lines<BufReader<File>>, line_no: &mut usize, name: &str) -> Option<Result<RawDocument>> {
    let mut block = String::new();
    let mut start_line = None;
    for line in lines.by_ref() {
        let line = match line {
            Ok(l) => l,
            Err(e) => return Some(Err(Error::io(name, e))),
        };
        *line_no += 1;
        let trimmed = line.trim();
        match start_line {
            None if trimmed.is_empty() => continue,
            None if trimmed.starts_with("<DOC>") => {
                start_line = Some(*line_no);
                block.push_str(&trimmed["<DOC>".len()..]);
                block.push('\n');
            }
            None => {
                return Some(Err(Error::parse(name, *line_no, "expected <DOC>")));
            }
            Some(_) => {
                block.push_str(&line);
                block.push('\n');
            }
        }
        if start_line.is_some() && trimmed.ends_with("</DOC>") {
            let start = start_line.unwrap_or(*line_no);
            return Some(parse_trec_block(&block, name, start));
        }
    }
    start_line.map(|l| Err(Error::parse(name, l, "unterminated <DOC> block")))
}

fn tag_content<'a>(block: &'a str, tag: &str) -> Option<&'a str> {
    let open = format!("<{tag}>");
    let close = format!("</{tag}>");
    let start = block.find(&open)? + open.len();
    let end = start + block[start..].find(&close)?;
    Some(&block[start..end])
}

fn parse_trec_block(block: &str, name: &str, line: usize) -> Result<RawDocument> {
    let doc_id = tag_content(block, "DOCNO")
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| Error::parse(name, line, "missing <DOCNO>"))?;
    let title = tag_content(block, "TITLE").map(str::trim).unwrap_or("");
    let body = tag_content(block, "TEXT").map(str::trim).unwrap_or("");
    Ok(RawDocument::new(doc_id, title, body))
}

#[derive(Deserialize)]
struct JsonTopic {
    topic_id: serde_json::Value,
    description: String,
}

/// Reads topics from JSONL (`topic_id`, `description`) or from TREC CDS
/// style XML (`<topic number="..">` with a `<description>` child). The
/// format is picked from the first non-blank character.
pub fn load_topics(path: impl AsRef<Path>) -> Result<Vec<Topic>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path.display().to_string();
    let topics = if text.trim_start().starts_with('<') {
        parse_xml_topics(&text, &name)?
    } else {
        parse_jsonl_topics(&text, &name)?
    };
    let mut seen = HashSet::new();
    for t in &topics {
        if !seen.insert(t.topic_id.as_str()) {
            return Err(Error::DuplicateId(t.topic_id.clone()));
        }
    }
    Ok(topics)
}

fn parse_jsonl_topics(text: &str, name: &str) -> Result<Vec<Topic>> {
    let mut topics = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let raw: JsonTopic = serde_json::from_str(line).map_err(|e| Error::parse(name, i + 1, e.to_string()))?;
        let topic_id = match raw.topic_id {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) => n.to_string(),
            _ => return Err(Error::parse(name, i + 1, "topic_id must be a string or number")),
        };
        topics.push(Topic::new(topic_id, raw.description));
    }
    Ok(topics)
}

fn xml_patterns() -> &'static (Regex, Regex, Regex) {
    static PATTERNS: OnceLock<(Regex, Regex, Regex)> = OnceLock::new();
    PATTERNS.get_or_init(|| {
        (
            Regex::new(r"(?s)<topic\b([^>]*)>(.*?)</topic>").unwrap(),
            Regex::new(r#"number\s*=\s*["']([^"']*)["']"#).unwrap(),
            Regex::new(r"(?s)<description>(.*?)</description>").unwrap(),
        )
    })
}

fn parse_xml_topics(text: &str, name: &str) -> Result<Vec<Topic>> {
    let (topic_re, number_re, desc_re) = xml_patterns();
    let line_of = |offset: usize| text[..offset].matches('\n').count() + 1;
    let mut topics = Vec::new();
    for cap in topic_re.captures_iter(text) {
        let whole = cap.get(0).map(|m| m.start()).unwrap_or(0);
        let attrs = &cap[1];
        let number = number_re
            .captures(attrs)
            .map(|c| c[1].trim().to_string())
            .ok_or_else(|| Error::parse(name, line_of(whole), "topic without number attribute"))?;
        let description = desc_re
            .captures(&cap[2])
            .map(|c| unescape_xml(c[1].trim()))
            .ok_or_else(|| Error::parse(name, line_of(whole), "topic without <description>"))?;
        topics.push(Topic::new(number, description));
    }
    Ok(topics)
}

fn unescape_xml(s: &str) -> String {
    s.replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&apos;", "'")
        .replace("&amp;", "&")
}
