use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

const DEFAULT_LEXICON: &str = include_str!("../../data/negex-lexicon.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhraseKind {
    Pre,
    Post,
    Pseudo,
    Terminator,
}

impl PhraseKind {
    fn section(self) -> &'static str {
        match self {
            PhraseKind::Pre => "pre",
            PhraseKind::Post => "post",
            PhraseKind::Pseudo => "pseudo",
            PhraseKind::Terminator => "term",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Entry {
    words: Vec<String>,
    kind: PhraseKind,
}

/// Trigger, pseudo-trigger and terminator phrases. Immutable once built.
///
/// Text format: `[pre]`, `[post]`, `[pseudo]` and `[term]` section headers
/// followed by one lowercase phrase per line. `#` starts a comment and a
/// `# version: <id>` comment names the lexicon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriggerLexicon {
    pre: Vec<String>,
    post: Vec<String>,
    pseudo: Vec<String>,
    terminators: Vec<String>,
    version: String,
    /// Phrases keyed by first word, longest first.
    by_first_word: HashMap<String, Vec<Entry>>,
}

impl TriggerLexicon {
    /// The shipped NegEx-style lexicon.
    pub fn negex() -> Self {
        Self::parse(DEFAULT_LEXICON).expect("shipped lexicon is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lists: HashMap<PhraseKind, Vec<String>> = HashMap::new();
        let mut current = None;
        let mut version = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(v) = comment.trim().strip_prefix("version:") {
                    version.get_or_insert_with(|| v.trim().to_string());
                }
                continue;
            }
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                current = Some(match header.trim() {
                    "pre" => PhraseKind::Pre,
                    "post" => PhraseKind::Post,
                    "pseudo" => PhraseKind::Pseudo,
                    "term" => PhraseKind::Terminator,
                    other => return Err(Error::Lexicon(format!("line {}: unknown section [{other}]", i + 1))),
                });
                continue;
            }
            let kind =
                current.ok_or_else(|| Error::Lexicon(format!("line {}: phrase before any section header", i + 1)))?;
            lists.entry(kind).or_default().push(line.to_string());
        }
        let mut take = |k| lists.remove(&k).unwrap_or_default();
        let (pre, post, pseudo, terminators) = (
            take(PhraseKind::Pre),
            take(PhraseKind::Post),
            take(PhraseKind::Pseudo),
            take(PhraseKind::Terminator),
        );
        let mut lexicon = Self::from_lists(pre, post, pseudo, terminators)?;
        lexicon.version = version.unwrap_or_else(|| "unversioned".to_string());
        Ok(lexicon)
    }

    pub fn from_lists<S: Into<String>>(
        pre: impl IntoIterator<Item = S>,
        post: impl IntoIterator<Item = S>,
        pseudo: impl IntoIterator<Item = S>,
        terminators: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let normalize = |it: &mut dyn Iterator<Item = String>| -> Vec<String> {
            it.map(|p| p.split_whitespace().collect::<Vec<_>>().join(" ")).collect()
        };
        let pre = normalize(&mut pre.into_iter().map(Into::into));
        let post = normalize(&mut post.into_iter().map(Into::into));
        let pseudo = normalize(&mut pseudo.into_iter().map(Into::into));
        let terminators = normalize(&mut terminators.into_iter().map(Into::into));

        if pre.is_empty() {
            return Err(Error::Lexicon("no pre-triggers".into()));
        }
        if terminators.is_empty() {
            return Err(Error::Lexicon("no terminators".into()));
        }

        let mut seen: HashMap<&str, PhraseKind> = HashMap::new();
        let mut by_first_word: HashMap<String, Vec<Entry>> = HashMap::new();
        for (kind, list) in [
            (PhraseKind::Pre, &pre),
            (PhraseKind::Post, &post),
            (PhraseKind::Pseudo, &pseudo),
            (PhraseKind::Terminator, &terminators),
        ] {
            let mut local = HashSet::new();
            for phrase in list {
                if phrase.is_empty() {
                    return Err(Error::Lexicon(format!("empty phrase in [{}]", kind.section())));
                }
                if phrase.to_lowercase() != *phrase {
                    return Err(Error::Lexicon(format!("phrase `{phrase}` is not lowercase")));
                }
                if let Some(other) = seen.get(phrase.as_str()) {
                    if *other != kind {
                        return Err(Error::Lexicon(format!(
                            "phrase `{phrase}` appears in both [{}] and [{}]",
                            other.section(),
                            kind.section()
                        )));
                    }
                }
                seen.insert(phrase, kind);
                if !local.insert(phrase.as_str()) {
                    continue;
                }
                let words: Vec<String> = phrase.split(' ').map(str::to_string).collect();
                by_first_word
                    .entry(words[0].clone())
                    .or_default()
                    .push(Entry { words, kind });
            }
        }
        for entries in by_first_word.values_mut() {
            entries.sort_by_key(|e| std::cmp::Reverse(e.words.len()));
        }

        Ok(Self {
            pre,
            post,
            pseudo,
            terminators,
            version: "inline".to_string(),
            by_first_word,
        })
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn pre_triggers(&self) -> &[String] {
        &self.pre
    }

    pub fn post_triggers(&self) -> &[String] {
        &self.post
    }

    pub fn pseudo_triggers(&self) -> &[String] {
        &self.pseudo
    }

    pub fn terminators(&self) -> &[String] {
        &self.terminators
    }

    /// Longest phrase matching `words` at its start, as (kind, word count).
    pub fn longest_match<S: AsRef<str>>(&self, words: &[S]) -> Option<(PhraseKind, usize)> {
        let first = words.first()?.as_ref();
        self.by_first_word.get(first)?.iter().find_map(|entry| {
            let n = entry.words.len();
            let hit = n <= words.len() && entry.words.iter().zip(words).all(|(a, b)| a == b.as_ref());
            hit.then_some((entry.kind, n))
        })
    }

    /// Serialized form that [`TriggerLexicon::parse`] reads back unchanged.
    pub fn to_text(&self) -> String {
        let mut out = format!("# version: {}\n", self.version);
        for (kind, list) in [
            (PhraseKind::Pre, &self.pre),
            (PhraseKind::Post, &self.post),
            (PhraseKind::Pseudo, &self.pseudo),
            (PhraseKind::Terminator, &self.terminators),
        ] {
            out.push_str(&format!("\n[{}]\n", kind.section()));
            for p in list {
                out.push_str(p);
                out.push('\n');
            }
        }
        out
    }
}

impl Default for TriggerLexicon {
    fn default() -> Self {
        Self::negex()
    }
}
