mod common;

use std::fs;

use negir::corpus::{load_collection, load_topics, CollectionFormat, RawDocument};
use negir::evalkit::{read_run, write_run, RunResult};
use negir::index::{index_collection, read_snapshot, write_snapshot, Bm25Params, Field, ScoredDoc};
use negir::querygen::build_bundle;
use negir::ranking::{Strategy, StrategyKind};
use negir::{Analyzer, Error};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn runs_survive_a_file_round_trip(
        scores in prop::collection::vec(prop::collection::vec(-1e6f64..1e6, 1..20), 1..6),
    ) {
        let mut run = RunResult::new("tag");
        for (t, topic_scores) in scores.iter().enumerate() {
            let docs = topic_scores
                .iter()
                .enumerate()
                .map(|(i, s)| ScoredDoc { doc_id: format!("t{t}d{i}"), score: *s })
                .collect();
            run.insert_ranking(format!("{}", t + 1), negir::index::top_k(docs, usize::MAX));
        }
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.run");
        write_run(&run, &path).unwrap();
        prop_assert_eq!(read_run(&path).unwrap(), run);
    }
}

#[test]
fn jsonl_collection_indexes_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("docs.jsonl");
    fs::write(
        &path,
        concat!(
            r#"{"doc_id":"a","title":"Smoker","body":"Heavy smoking for ten years."}"#,
            "\n",
            r#"{"doc_id":"b","title":"","body":"Patient denies smoking. Reports fever."}"#,
            "\n",
            r#"{"doc_id":"c","body":"Fever and cough."}"#,
            "\n",
        ),
    )
    .unwrap();
    let docs = load_collection(&path, CollectionFormat::Jsonl).unwrap();
    let analyzer = Analyzer::default();
    let index = index_collection(docs, &analyzer, Bm25Params::default()).unwrap();
    assert_eq!(index.doc_ids(), ["a", "b", "c"]);
    assert_eq!(index.doc_freq(Field::Tagged, "[nx]smoking"), 1);
    assert_eq!(index.doc_freq(Field::Plain, "smoking"), 2);

    let snap = dir.path().join("index.ngir");
    write_snapshot(&index, &snap).unwrap();
    let back = read_snapshot(&snap).unwrap();
    let topic = negir::corpus::Topic::new("1", "Fever. The patient denies smoking.");
    let bundle = build_bundle(&topic, back.analyzer().unwrap()).unwrap();
    for kind in StrategyKind::ALL {
        let s = Strategy::new(kind);
        assert_eq!(s.run(&bundle, &back, 10), s.run(&bundle, &index, 10));
    }
}

#[test]
fn duplicate_document_ids_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("docs.jsonl");
    fs::write(
        &path,
        "{\"doc_id\":\"a\",\"body\":\"x\"}\n{\"doc_id\":\"a\",\"body\":\"y\"}\n",
    )
    .unwrap();
    let docs: Result<Vec<RawDocument>, Error> = load_collection(&path, CollectionFormat::Jsonl).unwrap().collect();
    assert!(matches!(docs, Err(Error::DuplicateId(id)) if id == "a"));
}

#[test]
fn fixture_topics_load_in_file_order() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/groups/topics.jsonl");
    let topics = load_topics(path).unwrap();
    assert_eq!(topics.len(), 60);
    assert_eq!(topics[0].topic_id, "1");
    assert!(topics[59].description.contains("denies"));
}
