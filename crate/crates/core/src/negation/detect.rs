use super::{NegationScope, PhraseKind, ScopeKind, Span, TriggerLexicon};
use crate::corpus::Sentence;

/// How far a scope reaches from its trigger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScopeExtent {
    /// Up to the next terminator or trigger, or the sentence boundary.
    #[default]
    SubSentence,
    /// As `SubSentence`, but never more than this many tokens (NegEx uses 5).
    Window(usize),
}

#[derive(Debug, Clone, Copy)]
struct Event {
    kind: PhraseKind,
    start: usize,
    end: usize,
}

impl Event {
    fn is_boundary(&self) -> bool {
        self.kind != PhraseKind::Pseudo
    }
}

/// Finds negation scopes in one sentence with sub-sentence scope extent.
pub fn detect_negations(sentence: &Sentence, lexicon: &TriggerLexicon) -> Vec<NegationScope> {
    detect_negations_with(sentence, lexicon, ScopeExtent::SubSentence)
}

/// Left-to-right scan over the sentence's pre-stopword tokens.
///
/// At each token the longest lexicon phrase wins, so pseudo-triggers such as
/// "no increase" shadow the shorter trigger "no". A pre-trigger negates the
/// tokens after it up to the next terminator or trigger; a post-trigger
/// negates the tokens before it back to the previous terminator, trigger or
/// scope. Empty scopes are dropped.
pub fn detect_negations_with(sentence: &Sentence, lexicon: &TriggerLexicon, extent: ScopeExtent) -> Vec<NegationScope> {
    let Some(base) = sentence.first_position() else {
        return Vec::new();
    };
    let words: Vec<&str> = sentence.tokens.iter().map(|t| t.surface.as_str()).collect();

    let mut events = Vec::new();
    let mut i = 0;
    while i < words.len() {
        match lexicon.longest_match(&words[i..]) {
            Some((kind, n)) => {
                events.push(Event {
                    kind,
                    start: i,
                    end: i + n,
                });
                i += n;
            }
            None => i += 1,
        }
    }

    let window = match extent {
        ScopeExtent::SubSentence => usize::MAX,
        ScopeExtent::Window(n) => n,
    };

    let mut scopes = Vec::new();
    // Tokens before this index are already claimed by a boundary or scope.
    let mut claimed = 0;
    for (e, event) in events.iter().enumerate() {
        let (kind, start, end) = match event.kind {
            PhraseKind::Pre => {
                let limit = events[e + 1..]
                    .iter()
                    .find(|n| n.is_boundary())
                    .map_or(words.len(), |n| n.start);
                let end = limit.min(event.end.saturating_add(window));
                (ScopeKind::Pre, event.end, end)
            }
            PhraseKind::Post => {
                let start = claimed.max(event.start.saturating_sub(window));
                (ScopeKind::Post, start, event.start)
            }
            PhraseKind::Pseudo => continue,
            PhraseKind::Terminator => {
                claimed = claimed.max(event.end);
                continue;
            }
        };
        claimed = claimed.max(event.end);
        if start < end {
            claimed = claimed.max(end);
            scopes.push(NegationScope {
                sentence_index: sentence.index,
                trigger: words[event.start..event.end].join(" "),
                trigger_span: Span::new(base + event.start, base + event.end),
                scope_span: Span::new(base + start, base + end),
                kind,
            });
        }
    }
    scopes
}
