mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use negir::corpus::Stopwords;
use negir::negation::TriggerLexicon;

#[derive(Debug, Parser)]
#[command(name = "negir", about = "Negation-aware BM25 retrieval and evaluation")]
pub struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for indexing and run generation.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// `key = value` file with default settings; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an index snapshot from a document collection.
    Index(IndexArgs),
    /// Show negation scopes found in a text.
    Detect(DetectArgs),
    /// Show the query variants built from topics.
    Bundle(BundleArgs),
    /// Rank documents for every topic with one strategy and write a run file.
    Run(RunArgs),
    /// Score a run file against relevance judgments.
    Eval(EvalArgs),
    /// Compare runs on topics with and without negation.
    CompareGroups(CompareArgs),
}

#[derive(Debug, Args, Default)]
pub struct AnalyzerArgs {
    /// Stopword list; the built-in English list when omitted.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Trigger lexicon; the built-in lexicon when omitted.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    #[arg(long)]
    pub collection: Option<PathBuf>,
    /// jsonl, trec-text or plain-dir.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub analyzer: AnalyzerArgs,
    #[arg(long)]
    pub k1: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Text to analyze.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    pub text: Option<String>,
    /// File whose contents are analyzed.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub analyzer: AnalyzerArgs,
}

#[derive(Debug, Args)]
pub struct BundleArgs {
    /// Topic file (JSONL or XML).
    #[arg(long, conflicts_with = "text")]
    pub topics: Option<PathBuf>,
    /// A single description, given topic id `1`.
    #[arg(long)]
    pub text: Option<String>,
    #[command(flatten)]
    pub analyzer: AnalyzerArgs,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub index: Option<PathBuf>,
    #[arg(long)]
    pub topics: Option<PathBuf>,
    /// baseline, filtering, score_combination or negation_tagging.
    #[arg(long)]
    pub strategy: Option<String>,
    /// Fixed combination weight instead of the adaptive one.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub expansion_weight: Option<f64>,
    /// Documents retrieved per topic.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run tag; the strategy name when omitted.
    #[arg(long)]
    pub tag: Option<String>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub qrels: Option<PathBuf>,
    #[arg(long)]
    pub run: Option<PathBuf>,
    /// Pooled documents (`topic docid` per line) for infAP.
    #[arg(long)]
    pub pool: Option<PathBuf>,
    #[arg(long)]
    pub ndcg_cutoff: Option<usize>,
    /// Also list every topic.
    #[arg(long)]
    pub per_topic: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub topics: Option<PathBuf>,
    #[arg(long)]
    pub qrels: Option<PathBuf>,
    /// `name=path`, repeated once per run.
    #[arg(long = "run", required = true)]
    pub runs: Vec<String>,
    /// Name of the run the others are compared against.
    #[arg(long)]
    pub baseline: Option<String>,
    #[arg(long)]
    pub pool: Option<PathBuf>,
    #[arg(long)]
    pub ndcg_cutoff: Option<usize>,
    /// Take the analyzer from this snapshot instead of --stopwords/--lexicon.
    #[arg(long)]
    pub index: Option<PathBuf>,
    #[command(flatten)]
    pub analyzer: AnalyzerArgs,
}

fn version() -> String {
    format!(
        "{} (lexicon {}, stopwords {})",
        negir::VERSION,
        TriggerLexicon::negex().version(),
        Stopwords::english().version()
    )
}

fn main() -> ExitCode {
    let matches = Cli::command().version(version()).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match commands::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("negir: error: {e:#}");
            ExitCode::from(1)
        }
    }
}
