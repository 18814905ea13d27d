use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use negir::corpus::{load_collection, load_topics, CollectionFormat, Stopwords, Topic};
use negir::evalkit::{
    evaluate, format_table, group_analysis, read_pool, read_qrels, read_run, write_run, EvalConfig, RunResult,
};
use negir::index::{index_collection, read_snapshot, write_snapshot, Bm25Params, Field};
use negir::negation::TriggerLexicon;
use negir::querygen::{build_bundle, QueryBundle};
use negir::ranking::{Strategy, StrategyKind, StrategyParams};
use negir::Analyzer;

use crate::config::{ConfigFile, Resolver};
use crate::{AnalyzerArgs, BundleArgs, Cli, Command, CompareArgs, DetectArgs, EvalArgs, IndexArgs, RunArgs};

pub fn dispatch(cli: Cli) -> Result<()> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let mut cfg = Resolver::new(file);
    if let Some(path) = &cli.config {
        cfg.record("config", path.display());
    }
    if let Some(n) = cfg.opt("threads", cli.threads)? {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let json = cli.json;
    match cli.command {
        Command::Index(args) => index(args, cfg, json),
        Command::Detect(args) => detect(args, cfg),
        Command::Bundle(args) => bundle(args, cfg),
        Command::Run(args) => run(args, cfg, json),
        Command::Eval(args) => eval(args, cfg, json),
        Command::CompareGroups(args) => compare_groups(args, cfg, json),
    }
}

fn analyzer(args: AnalyzerArgs, cfg: &mut Resolver) -> Result<Analyzer> {
    let stopwords = match cfg.input("stopwords", args.stopwords)? {
        Some(p) => Stopwords::load(&p)?,
        None => Stopwords::english(),
    };
    let lexicon = match cfg.input("lexicon", args.lexicon)? {
        Some(p) => TriggerLexicon::load(&p)?,
        None => TriggerLexicon::negex(),
    };
    cfg.record("stopwords_version", stopwords.version());
    cfg.record("lexicon_version", lexicon.version());
    Ok(Analyzer::new(stopwords, lexicon))
}

fn header(cfg: &Resolver) -> String {
    let mut out = format!("# negir {}\n", negir::VERSION);
    for (k, v) in cfg.effective() {
        out.push_str(&format!("# {k} = {v}\n"));
    }
    out
}

fn print_json(value: &impl Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn index(args: IndexArgs, mut cfg: Resolver, json: bool) -> Result<()> {
    let collection = cfg.required_input("collection", args.collection)?;
    let format: String = cfg.or("format", args.format, "jsonl".to_string())?;
    let format: CollectionFormat = format.parse()?;
    let out = cfg.required_output("out", args.out)?;
    let analyzer = analyzer(args.analyzer, &mut cfg)?;
    let k1 = cfg.or("k1", args.k1, Bm25Params::LUCENE.k1)?;
    let b = cfg.or("b", args.b, Bm25Params::LUCENE.b)?;
    if !(k1.is_finite() && k1 >= 0.0) {
        bail!("k1 must be finite and non-negative, got {k1}");
    }
    if !(0.0..=1.0).contains(&b) {
        bail!("b must lie in [0, 1], got {b}");
    }

    let docs = load_collection(&collection, format)?;
    let index = index_collection(docs, &analyzer, Bm25Params { k1, b })?;
    write_snapshot(&index, &out)?;

    let summary = json!({
        "documents": index.doc_count(),
        "plain_terms": index.vocabulary_size(Field::Plain),
        "tagged_terms": index.vocabulary_size(Field::Tagged),
        "avg_doc_length": index.avg_doc_length(Field::Plain),
    });
    if json {
        print_json(&json!({ "config": cfg.effective(), "index": summary }))
    } else {
        print!("{}", header(&cfg));
        println!(
            "indexed {} documents ({} plain terms, {} tagged terms) into {}",
            index.doc_count(),
            index.vocabulary_size(Field::Plain),
            index.vocabulary_size(Field::Tagged),
            out.display()
        );
        Ok(())
    }
}

#[derive(Serialize)]
struct DetectedScope {
    trigger: String,
    kind: negir::negation::ScopeKind,
    scope_text: String,
}

#[derive(Serialize)]
struct DetectedSentence<'a> {
    sentence: usize,
    text: &'a str,
    scopes: Vec<DetectedScope>,
}

fn detect(args: DetectArgs, mut cfg: Resolver) -> Result<()> {
    let text = match (args.text, args.input) {
        (Some(t), _) => t,
        (None, Some(p)) => fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?,
        (None, None) => bail!("give --text or --input"),
    };
    let analyzer = analyzer(args.analyzer, &mut cfg)?;
    let analyzed = analyzer.analyze(&text);
    let sentences: Vec<DetectedSentence> = analyzed
        .sentences
        .iter()
        .map(|s| DetectedSentence {
            sentence: s.index,
            text: &text[s.start..s.end],
            scopes: analyzed
                .scopes
                .iter()
                .filter(|sc| sc.sentence_index == s.index)
                .map(|sc| DetectedScope {
                    trigger: sc.trigger.clone(),
                    kind: sc.kind,
                    scope_text: s
                        .tokens
                        .iter()
                        .filter(|t| sc.scope_span.contains(t.position))
                        .map(|t| t.surface.as_str())
                        .collect::<Vec<_>>()
                        .join(" "),
                })
                .collect(),
        })
        .collect();
    print_json(&sentences)
}

fn bundles_for(topics: &[Topic], analyzer: &Analyzer) -> Result<Vec<QueryBundle>> {
    topics
        .par_iter()
        .map(|t| build_bundle(t, analyzer).map_err(Into::into))
        .collect()
}

fn bundle(args: BundleArgs, mut cfg: Resolver) -> Result<()> {
    let topics = match (args.text, cfg.input("topics", args.topics)?) {
        (Some(text), _) => vec![Topic::new("1", text)],
        (None, Some(path)) => load_topics(&path)?,
        (None, None) => bail!("give --topics or --text"),
    };
    let analyzer = analyzer(args.analyzer, &mut cfg)?;
    let bundles = bundles_for(&topics, &analyzer)?;
    let params = StrategyParams::default();
    let out: Vec<_> = bundles
        .iter()
        .map(|b| {
            let terms = |q: &negir::index::WeightedQuery| q.term_surfaces().map(str::to_string).collect::<Vec<_>>();
            json!({
                "topic_id": b.topic_id,
                "q_full": terms(&b.q_full),
                "q_pos": terms(&b.q_pos),
                "q_neg": terms(&b.q_neg),
                "q_tagged": terms(&b.q_tagged),
                "n_full": b.n_full,
                "n_neg": b.n_neg,
                "beta_adaptive": params.beta_polynomial.eval(b.n_full),
                "scopes": b.scopes,
            })
        })
        .collect();
    print_json(&out)
}

fn run(args: RunArgs, mut cfg: Resolver, json: bool) -> Result<()> {
    let index_path = cfg.required_input("index", args.index)?;
    let topics_path = cfg.required_input("topics", args.topics)?;
    let strategy: String = cfg.required("strategy", args.strategy)?;
    let kind: StrategyKind = strategy.parse()?;
    let beta = cfg.opt("beta", args.beta)?;
    let expansion = cfg.or(
        "expansion_weight",
        args.expansion_weight,
        StrategyParams::default().tagging_expansion_weight,
    )?;
    let k = cfg.or("k", args.k, 1000usize)?;
    let out = cfg.required_output("out", args.out)?;
    let tag = cfg.or("tag", args.tag, kind.name().to_string())?;
    if tag.is_empty() || tag.contains(char::is_whitespace) {
        bail!("run tag must be a non-empty word, got `{tag}`");
    }
    if k == 0 {
        bail!("--k must be at least 1");
    }
    let strategy = Strategy::with_params(
        kind,
        StrategyParams {
            beta_override: beta,
            tagging_expansion_weight: expansion,
            ..StrategyParams::default()
        },
    )?;

    let index = read_snapshot(&index_path)?;
    let analyzer = index
        .analyzer()
        .cloned()
        .context("snapshot carries no analyzer; rebuild it with `negir index`")?;
    cfg.record("stopwords_version", analyzer.stopwords().version());
    cfg.record("lexicon_version", analyzer.lexicon.version());
    let topics = load_topics(&topics_path)?;
    let bundles = bundles_for(&topics, &analyzer)?;
    let rankings: Vec<_> = bundles
        .par_iter()
        .map(|b| (b.topic_id.clone(), strategy.run(b, &index, k)))
        .collect();
    let mut result = RunResult::new(tag);
    for (topic, docs) in rankings {
        result.insert_ranking(topic, docs);
    }
    write_run(&result, &out)?;

    let negated = bundles.iter().filter(|b| b.has_negation()).count();
    if json {
        print_json(&json!({
            "config": cfg.effective(),
            "topics": bundles.len(),
            "topics_with_negation": negated,
            "out": out.display().to_string(),
        }))
    } else {
        print!("{}", header(&cfg));
        println!(
            "wrote {} topics ({} with negation) to {}",
            bundles.len(),
            negated,
            out.display()
        );
        Ok(())
    }
}

fn eval_config(cfg: &mut Resolver, pool: Option<std::path::PathBuf>, cutoff: Option<usize>) -> Result<EvalConfig> {
    let pool = match cfg.input("pool", pool)? {
        Some(p) => Some(read_pool(&p)?),
        None => None,
    };
    let ndcg_cutoff = cfg.or("ndcg_cutoff", cutoff, EvalConfig::default().ndcg_cutoff)?;
    if ndcg_cutoff == 0 {
        bail!("--ndcg-cutoff must be at least 1");
    }
    Ok(EvalConfig {
        ndcg_cutoff,
        pool,
        ..EvalConfig::default()
    })
}

fn eval(args: EvalArgs, mut cfg: Resolver, json: bool) -> Result<()> {
    let qrels_path = cfg.required_input("qrels", args.qrels)?;
    let run_path = cfg.required_input("run", args.run)?;
    let eval_cfg = eval_config(&mut cfg, args.pool, args.ndcg_cutoff)?;
    let qrels = read_qrels(&qrels_path)?;
    let run = read_run(&run_path)?;
    let report = evaluate(&run, &qrels, &eval_cfg);
    if json {
        return print_json(&json!({ "config": cfg.effective(), "report": report }));
    }
    print!("{}", header(&cfg));
    let mut rows = Vec::new();
    if args.per_topic {
        rows.extend(report.topics.iter().map(|t| (t.topic_id.clone(), t.values)));
    }
    rows.push((report.run_tag.clone(), report.mean));
    print!("{}", format_table(&rows));
    Ok(())
}

fn compare_groups(args: CompareArgs, mut cfg: Resolver, json: bool) -> Result<()> {
    let topics_path = cfg.required_input("topics", args.topics)?;
    let qrels_path = cfg.required_input("qrels", args.qrels)?;
    let mut run_paths = BTreeMap::new();
    let mut order = Vec::new();
    for arg in &args.runs {
        let (name, path) = arg
            .split_once('=')
            .with_context(|| format!("--run expects name=path, got `{arg}`"))?;
        if name.is_empty() {
            bail!("--run `{arg}` has an empty name");
        }
        if !Path::new(path).exists() {
            bail!("run path {path} does not exist");
        }
        if run_paths.insert(name.to_string(), path.to_string()).is_some() {
            bail!("run name `{name}` given twice");
        }
        order.push(name.to_string());
    }
    let baseline = cfg.or("baseline", args.baseline, "baseline".to_string())?;
    if !run_paths.contains_key(&baseline) {
        bail!("no --run named `{baseline}`; name the baseline run with --baseline");
    }
    for (name, path) in &run_paths {
        cfg.record(&format!("run.{name}"), path);
    }
    let eval_cfg = eval_config(&mut cfg, args.pool, args.ndcg_cutoff)?;
    let analyzer = match cfg.input("index", args.index)? {
        Some(p) => {
            let a = read_snapshot(&p)?
                .analyzer()
                .cloned()
                .context("snapshot carries no analyzer")?;
            cfg.record("stopwords_version", a.stopwords().version());
            cfg.record("lexicon_version", a.lexicon.version());
            a
        }
        None => analyzer(args.analyzer, &mut cfg)?,
    };

    let topics = load_topics(&topics_path)?;
    let bundles = bundles_for(&topics, &analyzer)?;
    let qrels = read_qrels(&qrels_path)?;
    let runs = order
        .iter()
        .map(|name| Ok((name.clone(), read_run(&run_paths[name])?)))
        .collect::<Result<Vec<_>>>()?;
    let report = group_analysis(&bundles, &runs, &qrels, &eval_cfg, &baseline)?;
    if json {
        return print_json(&json!({
            "config": cfg.effective(),
            "report": report,
            "baseline_group_difference": report.baseline_group_difference(),
        }));
    }
    print!("{}", header(&cfg));
    print!("{}", report.to_table());
    if let Some(diff) = report.baseline_group_difference() {
        let pct = |v: Option<f64>| v.map_or_else(|| "undefined".into(), |x| format!("{:+.1}%", 100.0 * x));
        println!(
            "baseline D+ vs D-: P@10 {}  NDCG {}  infAP {}  RPrec {}",
            pct(diff[0]),
            pct(diff[1]),
            pct(diff[2]),
            pct(diff[3])
        );
    }
    Ok(())
}
