//! Independent reference computations and synthetic data shared by the
//! integration tests. Nothing here goes through the index or metric code
//! it is used to check.
#![allow(dead_code)]

use std::collections::HashMap;

use negir::corpus::{RawDocument, Token, TokenStream, Topic};
use negir::evalkit::Qrels;
use negir::index::{build_index, Bm25Params, Index, IndexedDocument};
use negir::negation::tag_tokens;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// BM25 of one document computed by scanning the raw token lists.
pub fn bm25_bruteforce(docs: &[Vec<String>], query: &[(String, f64)], doc: usize, k1: f64, b: f64) -> f64 {
    let n = docs.len() as f64;
    let avgdl = docs.iter().map(|d| d.len()).sum::<usize>() as f64 / n;
    let len = docs[doc].len() as f64;
    let mut score = 0.0;
    for (term, weight) in query {
        let tf = docs[doc].iter().filter(|t| *t == term).count() as f64;
        if tf == 0.0 {
            continue;
        }
        let df = docs.iter().filter(|d| d.contains(term)).count() as f64;
        let idf = (1.0 + (n - df + 0.5) / (df + 0.5)).ln();
        score += weight * idf * (tf * (k1 + 1.0)) / (tf + k1 * (1.0 - b + b * len / avgdl));
    }
    score
}

/// Sort `(id, score)` by score descending then id ascending.
pub fn rank_pairs(mut pairs: Vec<(String, f64)>) -> Vec<(String, f64)> {
    pairs.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    pairs
}

/// Index of pre-tokenized documents without any negation tagging.
pub fn index_tokens(ids: &[String], docs: &[Vec<String>], params: Bm25Params) -> Index {
    let indexed = ids.iter().zip(docs).map(|(id, words)| {
        let plain = TokenStream {
            tokens: words
                .iter()
                .enumerate()
                .map(|(i, w)| Token {
                    surface: w.clone(),
                    sentence_index: 0,
                    position: i,
                })
                .collect(),
            source_len: words.len(),
        };
        let tagged = tag_tokens(&plain, &[]).unwrap();
        IndexedDocument {
            doc_id: id.clone(),
            plain,
            tagged,
        }
    });
    build_index(indexed, params).unwrap()
}

/// Random bag-of-words corpus: `n_docs` documents over `vocab` terms.
pub fn random_corpus(
    rng: &mut impl Rng,
    n_docs: usize,
    vocab: usize,
    max_len: usize,
) -> (Vec<String>, Vec<Vec<String>>) {
    let ids = (0..n_docs)
        .map(|i| format!("d{:03}", rng.gen_range(0..1000) * 1000 + i))
        .collect();
    let docs = (0..n_docs)
        .map(|_| {
            let len = rng.gen_range(0..=max_len);
            // skewed draw so some terms are frequent and tf varies
            (0..len)
                .map(|_| {
                    let a = rng.gen_range(0..vocab);
                    let b = rng.gen_range(0..vocab);
                    format!("w{}", a.min(b))
                })
                .collect()
        })
        .collect();
    (ids, docs)
}

/// Content words that are neither stopwords nor part of any lexicon phrase.
pub const CLINICAL_WORDS: &[&str] = &[
    "fever",
    "cough",
    "dyspnea",
    "rash",
    "pain",
    "chest",
    "abdominal",
    "nausea",
    "vomiting",
    "diarrhea",
    "headache",
    "fatigue",
    "weight",
    "loss",
    "edema",
    "hypertension",
    "diabetes",
    "smoking",
    "tachycardia",
    "murmur",
    "anemia",
    "jaundice",
    "pruritus",
    "syncope",
    "seizure",
    "confusion",
    "weakness",
    "numbness",
    "palpitations",
    "wheezing",
    "hemoptysis",
    "arthralgia",
    "myalgia",
    "lymphadenopathy",
    "splenomegaly",
    "hepatomegaly",
    "ascites",
    "cyanosis",
    "dysuria",
    "hematuria",
    "polyuria",
    "thirst",
    "tremor",
    "ataxia",
    "vertigo",
    "tinnitus",
    "photophobia",
    "stiffness",
    "swelling",
    "erythema",
];

/// A document text built from clinical words, sentence punctuation and,
/// optionally, negation triggers, pseudo-triggers and terminators.
pub fn random_clinical_text(rng: &mut impl Rng, sentences: usize, with_negation: bool) -> String {
    const NEGATION_BITS: &[&str] = &[
        "no",
        "not",
        "denies",
        "without",
        "negative for",
        "free of",
        "absence of",
        "never had",
        "was ruled out",
        "were ruled out",
        "no increase",
        "gram negative",
        "not certain if",
        "but",
        "however",
        "although",
        "except",
        "aside from",
    ];
    const FILLER: &[&str] = &[
        "the", "patient", "she", "he", "has", "with", "and", "or", "a", "of", "reports",
    ];
    let mut out = String::new();
    for _ in 0..sentences {
        let words = rng.gen_range(1..14);
        let mut parts: Vec<String> = Vec::new();
        for _ in 0..words {
            let roll = rng.gen_range(0..10);
            let w = if with_negation && roll < 2 {
                NEGATION_BITS.choose(rng).unwrap().to_string()
            } else if roll < 4 {
                FILLER.choose(rng).unwrap().to_string()
            } else {
                CLINICAL_WORDS.choose(rng).unwrap().to_string()
            };
            parts.push(w);
        }
        let mut sentence = parts.join(if rng.gen_bool(0.2) { ", " } else { " " });
        if let Some(first) = sentence.get_mut(0..1) {
            first.make_ascii_uppercase();
        }
        out.push_str(&sentence);
        out.push_str([". ", "; ", "? ", "! "].choose(rng).unwrap());
    }
    out
}

/// Negation-free topics and a collection over the same vocabulary.
pub fn negation_free_setup(seed: u64, n_topics: usize, n_docs: usize) -> (Vec<Topic>, Vec<RawDocument>) {
    let mut r = rng(seed);
    let topics = (0..n_topics)
        .map(|i| Topic::new(format!("{}", i + 1), random_clinical_text(&mut r, 3, false)))
        .collect();
    let docs = (0..n_docs)
        .map(|i| RawDocument::new(format!("doc{i:04}"), "", random_clinical_text(&mut r, 4, false)))
        .collect();
    (topics, docs)
}

/// Planted-relevance collection for the directional experiment.
///
/// Negation-bearing topics list positive findings followed by a denied
/// finding list. Relevant documents contain most positive findings and
/// mention the denied ones only in negated form; distractors carry fewer
/// positive findings but assert the denied ones. Negation-free topics get
/// relevant documents and partial-match distractors only.
pub struct PlantedCollection {
    pub topics: Vec<Topic>,
    pub docs: Vec<RawDocument>,
    pub qrels: Qrels,
    pub negated_topics: Vec<String>,
}

pub fn planted_collection(seed: u64) -> PlantedCollection {
    const NEG_TOPICS: usize = 20;
    const FREE_TOPICS: usize = 5;
    const POSITIVE: usize = 45;
    const DENIED: usize = 10;
    const PER_TOPIC: usize = 10;
    let mut r = rng(seed);
    let mut topics = Vec::new();
    let mut docs = Vec::new();
    let mut qrels = Qrels::new();
    let mut negated_topics = Vec::new();
    let term = |t: usize, kind: &str, i: usize| format!("t{t}{kind}{i}");

    for t in 0..NEG_TOPICS + FREE_TOPICS {
        let tid = format!("{}", t + 1);
        let negated = t < NEG_TOPICS;
        let positives: Vec<String> = (0..POSITIVE).map(|i| term(t, "p", i)).collect();
        let denied: Vec<String> = (0..DENIED).map(|i| term(t, "n", i)).collect();
        let mut description = format!("Patient presents with {}.", positives.join(", "));
        if negated {
            description.push_str(&format!(" She denies {}.", denied.join(", ")));
            negated_topics.push(tid.clone());
        }
        topics.push(Topic::new(tid.clone(), description));

        for j in 0..PER_TOPIC {
            // relevant: 40 of 45 positives, a few denied findings negated
            let mut pos = positives.clone();
            pos.shuffle(&mut r);
            let mut body = format!("Case with {}.", pos[..40].join(" "));
            if negated && j % 2 == 0 {
                let mut d = denied.clone();
                d.shuffle(&mut r);
                for n in &d[..3] {
                    body.push_str(&format!(" No {n}."));
                }
            }
            let id = format!("t{t:02}rel{j}");
            qrels.insert(tid.as_str(), id.as_str(), 1).unwrap();
            docs.push(RawDocument::new(id, "", body));
        }
        for j in 0..PER_TOPIC {
            // distractor: 34 positives, and the denied findings asserted
            let mut pos = positives.clone();
            pos.shuffle(&mut r);
            let mut body = format!("Report of {}.", pos[..34].join(" "));
            if negated {
                body.push_str(&format!(" Findings include {}.", denied.join(" ")));
            }
            let id = format!("t{t:02}dis{j}");
            qrels.insert(tid.as_str(), id.as_str(), 0).unwrap();
            docs.push(RawDocument::new(id, "", body));
        }
    }
    let noise_needed = 500 - docs.len();
    for i in 0..noise_needed {
        let body = random_clinical_text(&mut r, 3, true);
        docs.push(RawDocument::new(format!("noise{i:03}"), "", body));
    }
    PlantedCollection {
        topics,
        docs,
        qrels,
        negated_topics,
    }
}

/// Random ranking of at most 12 docs with qrels over a 16-doc universe;
/// some retrieved docs are unjudged.
pub fn random_eval_instance(rng: &mut impl Rng) -> (Vec<String>, Qrels) {
    let universe: Vec<String> = (0..16).map(|i| format!("d{i}")).collect();
    let mut shuffled = universe.clone();
    shuffled.shuffle(rng);
    let n = rng.gen_range(0..=12);
    let ranking = shuffled[..n].to_vec();
    let mut qrels = Qrels::new();
    for d in &universe {
        if rng.gen_bool(0.7) {
            qrels.insert("q", d.as_str(), rng.gen_range(0..=3)).unwrap();
        }
    }
    if qrels.is_empty() {
        qrels.insert("q", "d0", 0).unwrap();
    }
    (ranking, qrels)
}

/// Reference metrics computed by enumerating the ranking prefix by prefix.
pub mod reference {
    use super::*;

    fn grades(qrels: &Qrels) -> HashMap<String, u32> {
        qrels.topic("q").cloned().unwrap_or_default()
    }

    pub fn precision(ranking: &[String], qrels: &Qrels, k: usize) -> f64 {
        let g = grades(qrels);
        let mut hits = 0.0;
        for rank in 1..=k {
            if let Some(d) = ranking.get(rank - 1) {
                if g.get(d).copied().unwrap_or(0) > 0 {
                    hits += 1.0;
                }
            }
        }
        hits / k as f64
    }

    pub fn ndcg(ranking: &[String], qrels: &Qrels) -> f64 {
        let g = grades(qrels);
        let dcg_of = |gains: &[u32]| -> f64 {
            gains
                .iter()
                .enumerate()
                .map(|(i, &x)| x as f64 * std::f64::consts::LN_2 / ((i + 2) as f64).ln())
                .sum()
        };
        let run_gains: Vec<u32> = ranking.iter().map(|d| g.get(d).copied().unwrap_or(0)).collect();
        // best achievable order: largest grade first, by selection
        let mut pool: Vec<u32> = g.values().copied().filter(|&x| x > 0).collect();
        let mut ideal = Vec::new();
        while !pool.is_empty() {
            let (i, _) = pool.iter().enumerate().max_by_key(|(_, &x)| x).unwrap();
            ideal.push(pool.swap_remove(i));
        }
        let idcg = dcg_of(&ideal);
        if idcg == 0.0 {
            0.0
        } else {
            dcg_of(&run_gains) / idcg
        }
    }

    pub fn ap(ranking: &[String], qrels: &Qrels) -> f64 {
        let g = grades(qrels);
        let relevant: Vec<&String> = g.iter().filter(|(_, &x)| x > 0).map(|(d, _)| d).collect();
        if relevant.is_empty() {
            return 0.0;
        }
        let mut total = 0.0;
        for r in &relevant {
            if let Some(pos) = ranking.iter().position(|d| d == *r) {
                let prefix = &ranking[..=pos];
                let rel_in_prefix = prefix.iter().filter(|d| g.get(*d).copied().unwrap_or(0) > 0).count();
                total += rel_in_prefix as f64 / prefix.len() as f64;
            }
        }
        total / relevant.len() as f64
    }

    pub fn r_prec(ranking: &[String], qrels: &Qrels) -> f64 {
        let g = grades(qrels);
        let r = g.values().filter(|&&x| x > 0).count();
        if r == 0 {
            return 0.0;
        }
        precision(ranking, qrels, r)
    }
}
