use regex::Regex;

use super::{Sentence, Stopwords, Token, TokenStream};

const SENTENCE_DELIMITERS: [char; 4] = ['.', '?', '!', ';'];

/// How raw text is cut into tokens.
#[derive(Debug, Clone, Default)]
pub enum TokenPattern {
    /// Maximal runs of alphanumeric characters. Anything else, hyphens and
    /// slashes included, separates tokens.
    #[default]
    AlphaNumeric,
    /// Every non-empty match of the regex is a token.
    Custom(Regex),
}

impl TokenPattern {
    fn spans(&self, text: &str) -> Vec<(usize, usize)> {
        match self {
            TokenPattern::AlphaNumeric => {
                let mut spans = Vec::new();
                let mut start = None;
                for (i, c) in text.char_indices() {
                    match (c.is_alphanumeric(), start) {
                        (true, None) => start = Some(i),
                        (false, Some(s)) => {
                            spans.push((s, i));
                            start = None;
                        }
                        _ => {}
                    }
                }
                if let Some(s) = start {
                    spans.push((s, text.len()));
                }
                spans
            }
            TokenPattern::Custom(re) => re
                .find_iter(text)
                .filter(|m| !m.as_str().is_empty())
                .map(|m| (m.start(), m.end()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct TokenizerConfig {
    pub stopwords: Stopwords,
    pub pattern: TokenPattern,
}

impl TokenizerConfig {
    pub fn new(stopwords: Stopwords) -> Self {
        Self {
            stopwords,
            pattern: TokenPattern::default(),
        }
    }
}

/// Splits `text` into sentences using the default token pattern.
pub fn split_sentences(text: &str) -> Vec<Sentence> {
    split_sentences_with(text, &TokenPattern::AlphaNumeric)
}

/// Splits `text` at `.`, `?`, `!` or `;` followed by whitespace (or the end
/// of the text). Whitespace-only segments are dropped, so sentence indices
/// stay dense. Token positions count across the whole text.
pub fn split_sentences_with(text: &str, pattern: &TokenPattern) -> Vec<Sentence> {
    let mut sentences = Vec::new();
    let mut position = 0;
    let mut segment_start = 0;
    let mut chars = text.char_indices().peekable();

    let push = |start: usize, end: usize, sentences: &mut Vec<Sentence>, position: &mut usize| {
        let segment = &text[start..end];
        let trimmed_start = start + (segment.len() - segment.trim_start().len());
        let trimmed_end = start + segment.trim_end().len();
        if trimmed_start >= trimmed_end {
            return;
        }
        let index = sentences.len();
        let tokens = pattern
            .spans(&text[trimmed_start..trimmed_end])
            .into_iter()
            .map(|(s, e)| {
                let token = Token {
                    surface: text[trimmed_start + s..trimmed_start + e].to_lowercase(),
                    sentence_index: index,
                    position: *position,
                };
                *position += 1;
                token
            })
            .collect();
        sentences.push(Sentence {
            index,
            start: trimmed_start,
            end: trimmed_end,
            tokens,
        });
    };

    while let Some((i, c)) = chars.next() {
        if !SENTENCE_DELIMITERS.contains(&c) {
            continue;
        }
        let at_boundary = match chars.peek() {
            None => true,
            Some(&(_, next)) => next.is_whitespace(),
        };
        if at_boundary {
            push(segment_start, i, &mut sentences, &mut position);
            segment_start = i + c.len_utf8();
        }
    }
    push(segment_start, text.len(), &mut sentences, &mut position);
    sentences
}

/// Lowercases, tokenizes and removes stopwords.
pub fn tokenize(text: &str, config: &TokenizerConfig) -> TokenStream {
    let sentences = split_sentences_with(text, &config.pattern);
    stream_from_sentences(&sentences, &config.stopwords)
}

pub(crate) fn stream_from_sentences(sentences: &[Sentence], stopwords: &Stopwords) -> TokenStream {
    let source_len = sentences.iter().map(|s| s.tokens.len()).sum();
    let tokens = sentences
        .iter()
        .flat_map(|s| s.tokens.iter())
        .filter(|t| !stopwords.contains(&t.surface))
        .cloned()
        .collect();
    TokenStream { tokens, source_len }
}
