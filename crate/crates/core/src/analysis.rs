use crate::corpus::{
    split_sentences_with, tokenize::stream_from_sentences, Sentence, Stopwords, TokenStream, TokenizerConfig,
};
use crate::negation::{
    detect_negations_with, tag_tokens, NegationScope, ScopeExtent, TaggedTokenStream, TriggerLexicon,
};

/// Text pipeline shared by documents and queries: sentence split, scope
/// detection on the full token sequence, then stopword removal and tagging.
#[derive(Debug, Clone, Default)]
pub struct Analyzer {
    pub tokenizer: TokenizerConfig,
    pub lexicon: TriggerLexicon,
    pub extent: ScopeExtent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalyzedText {
    pub sentences: Vec<Sentence>,
    pub scopes: Vec<NegationScope>,
    pub stream: TokenStream,
    pub tagged: TaggedTokenStream,
}

impl Analyzer {
    pub fn new(stopwords: Stopwords, lexicon: TriggerLexicon) -> Self {
        Self {
            tokenizer: TokenizerConfig::new(stopwords),
            lexicon,
            extent: ScopeExtent::default(),
        }
    }

    pub fn stopwords(&self) -> &Stopwords {
        &self.tokenizer.stopwords
    }

    pub fn analyze(&self, text: &str) -> AnalyzedText {
        let sentences = split_sentences_with(text, &self.tokenizer.pattern);
        let scopes: Vec<NegationScope> = sentences
            .iter()
            .flat_map(|s| detect_negations_with(s, &self.lexicon, self.extent))
            .collect();
        let stream = stream_from_sentences(&sentences, &self.tokenizer.stopwords);
        let tagged = tag_tokens(&stream, &scopes).expect("detected scopes lie within their own text");
        AnalyzedText {
            sentences,
            scopes,
            stream,
            tagged,
        }
    }
}
