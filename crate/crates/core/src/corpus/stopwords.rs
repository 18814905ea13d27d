use std::collections::HashSet;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

const ENGLISH: &str = include_str!("../../data/stopwords-en.txt");

/// A stopword list. Lines are single lowercase words; `#` starts a comment
/// and a `# version: <id>` comment names the list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stopwords {
    words: HashSet<String>,
    version: String,
}

impl Stopwords {
    /// The shipped English list.
    pub fn english() -> Self {
        Self::parse(ENGLISH)
    }

    pub fn empty() -> Self {
        Self {
            words: HashSet::new(),
            version: "none".to_string(),
        }
    }

    pub fn parse(text: &str) -> Self {
        let mut words = HashSet::new();
        let mut version = None;
        for line in text.lines() {
            let line = line.trim();
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(v) = comment.trim().strip_prefix("version:") {
                    version.get_or_insert_with(|| v.trim().to_string());
                }
                continue;
            }
            let word = match line.split('#').next() {
                Some(w) => w.trim(),
                None => continue,
            };
            if !word.is_empty() {
                words.insert(word.to_lowercase());
            }
        }
        Self {
            words,
            version: version.unwrap_or_else(|| "unversioned".to_string()),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text))
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            words: words.into_iter().map(|w| w.as_ref().to_lowercase()).collect(),
            version: "inline".to_string(),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Serialized form that [`Stopwords::parse`] reads back unchanged.
    pub fn to_text(&self) -> String {
        let mut words: Vec<&str> = self.words.iter().map(String::as_str).collect();
        words.sort_unstable();
        let mut out = format!("# version: {}\n", self.version);
        for w in words {
            out.push_str(w);
            out.push('\n');
        }
        out
    }
}

impl Default for Stopwords {
    fn default() -> Self {
        Self::english()
    }
}
