use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

/// Screening prioritisation driven by a review's Boolean query.
///
/// Settings can come from a flat `key = value` config file (--config);
/// flags override the file. Exit codes: 0 success, 1 usage or config
/// error, 2 data error, 3 generation endpoint error.
#[derive(Debug, Parser)]
#[command(name = "screenprio", version)]
pub struct Cli {
    /// Flat key = value config file.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker threads for per-topic work (also caps in-flight generation requests).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate natural-language queries for every topic (cached).
    Generate {
        #[command(flatten)]
        inputs: InputArgs,
        #[command(flatten)]
        generation: GenerationArgs,
    },
    /// Rank each topic's candidates and write one run file per query variant.
    Rank {
        #[command(flatten)]
        inputs: InputArgs,
        #[command(flatten)]
        scoring: ScoringArgs,
        #[command(flatten)]
        generation: GenerationArgs,
    },
    /// CombSUM-fuse run files into one run.
    Fuse {
        /// Run files to fuse.
        #[arg(required = true)]
        runs: Vec<PathBuf>,
        /// Output run file.
        #[arg(long, short)]
        output: PathBuf,
        /// Score normalisation before summing: none or minmax.
        #[arg(long)]
        normalize: Option<String>,
        /// Run tag written to the output.
        #[arg(long, default_value = "combsum")]
        tag: String,
    },
    /// Pick, per topic, the input run with the highest AP.
    Oracle {
        /// Candidate run files.
        #[arg(required = true)]
        runs: Vec<PathBuf>,
        #[command(flatten)]
        metrics: MetricArgs,
        /// Output run file holding the chosen lists.
        #[arg(long, short)]
        output: PathBuf,
        /// CSV report of the choices (stdout when omitted).
        #[arg(long)]
        report: Option<PathBuf>,
        /// Run tag written to the output.
        #[arg(long, default_value = "oracle")]
        tag: String,
    },
    /// Evaluate run files against qrels and print a CSV table.
    Eval {
        /// Run files to evaluate.
        #[arg(required = true)]
        runs: Vec<PathBuf>,
        #[command(flatten)]
        metrics: MetricArgs,
        /// CSV output file (stdout when omitted).
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// JSON summary of the means per run.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// generate (for the generated source), rank, fuse and eval in one go.
    Pipeline {
        #[command(flatten)]
        inputs: InputArgs,
        #[command(flatten)]
        scoring: ScoringArgs,
        #[command(flatten)]
        generation: GenerationArgs,
        #[command(flatten)]
        metrics: MetricArgs,
        /// Score normalisation for fusion: none or minmax.
        #[arg(long)]
        normalize: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Corpus JSONL (doc_id, title, abstract).
    #[arg(long)]
    pub corpus: Option<String>,
    /// Topics JSONL (topic_id, boolean, title, working_title).
    #[arg(long)]
    pub topics: Option<String>,
    /// Candidate membership file (`topic_id doc_id` per line); defaults to the whole corpus.
    #[arg(long)]
    pub candidates: Option<String>,
    /// Directory for run files.
    #[arg(long)]
    pub runs_dir: Option<String>,
    /// Generated-queries JSONL (read and written).
    #[arg(long)]
    pub generated: Option<String>,
}

impl InputArgs {
    pub fn pairs(&self) -> Vec<(&'static str, Option<String>)> {
        vec![
            ("corpus", self.corpus.clone()),
            ("topics", self.topics.clone()),
            ("candidates", self.candidates.clone()),
            ("runs_dir", self.runs_dir.clone()),
            ("generated", self.generated.clone()),
        ]
    }
}

#[derive(Debug, Args)]
pub struct ScoringArgs {
    /// bm25, qlm or clf.
    #[arg(long)]
    pub scorer: Option<String>,
    /// boolean-terms, generated, final-title or working-title.
    #[arg(long)]
    pub source: Option<String>,
    /// Clause scorer for clf: bm25 or binary.
    #[arg(long)]
    pub clf_scoring: Option<String>,
    #[arg(long)]
    pub bm25_k1: Option<f64>,
    #[arg(long)]
    pub bm25_b: Option<f64>,
    #[arg(long)]
    pub qlm_lambda: Option<f64>,
}

impl ScoringArgs {
    pub fn pairs(&self) -> Vec<(&'static str, Option<String>)> {
        vec![
            ("scorer", self.scorer.clone()),
            ("source", self.source.clone()),
            ("clf_scoring", self.clf_scoring.clone()),
            ("bm25_k1", self.bm25_k1.map(|v| v.to_string())),
            ("bm25_b", self.bm25_b.map(|v| v.to_string())),
            ("qlm_lambda", self.qlm_lambda.map(|v| v.to_string())),
        ]
    }
}

#[derive(Debug, Args)]
pub struct GenerationArgs {
    /// Chat/completions endpoint URL.
    #[arg(long)]
    pub endpoint_url: Option<String>,
    /// Model name sent to the endpoint.
    #[arg(long)]
    pub model_name: Option<String>,
    /// Cache key for the generated queries (defaults to the model name).
    #[arg(long)]
    pub model_tag: Option<String>,
    /// single or multi.
    #[arg(long)]
    pub mode: Option<String>,
    /// chatgpt, alpaca, title, or a file holding a template with `{boolean}`.
    #[arg(long)]
    pub template: Option<String>,
    #[arg(long)]
    pub temperature: Option<f64>,
    #[arg(long)]
    pub num_generations: Option<usize>,
    #[arg(long)]
    pub max_retries: Option<u32>,
    /// Request timeout in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    /// chat or completion.
    #[arg(long)]
    pub api_schema: Option<String>,
    #[arg(long)]
    pub max_tokens: Option<u32>,
    #[arg(long)]
    pub top_p: Option<f64>,
    /// Environment variable holding the API key; `none` sends no key.
    #[arg(long)]
    pub api_key_env: Option<String>,
    /// First retry delay in milliseconds.
    #[arg(long)]
    pub retry_base_ms: Option<u64>,
}

impl GenerationArgs {
    pub fn pairs(&self) -> Vec<(&'static str, Option<String>)> {
        vec![
            ("endpoint_url", self.endpoint_url.clone()),
            ("model_name", self.model_name.clone()),
            ("model_tag", self.model_tag.clone()),
            ("mode", self.mode.clone()),
            ("template", self.template.clone()),
            ("temperature", self.temperature.map(|v| v.to_string())),
            ("num_generations", self.num_generations.map(|v| v.to_string())),
            ("max_retries", self.max_retries.map(|v| v.to_string())),
            ("timeout", self.timeout.map(|v| v.to_string())),
            ("api_schema", self.api_schema.clone()),
            ("max_tokens", self.max_tokens.map(|v| v.to_string())),
            ("top_p", self.top_p.map(|v| v.to_string())),
            ("api_key_env", self.api_key_env.clone()),
            ("retry_base_ms", self.retry_base_ms.map(|v| v.to_string())),
        ]
    }
}

#[derive(Debug, Args)]
pub struct MetricArgs {
    /// Qrels file (`topic 0 doc grade`).
    #[arg(long)]
    pub qrels: Option<String>,
    /// abstract or fulltext; recorded with the judgments.
    #[arg(long)]
    pub judgment_level: Option<String>,
    /// Recall cutoffs in percent, comma-separated [default: 1,5,10,20].
    #[arg(long)]
    pub percents: Option<String>,
    /// WSS recall targets, comma-separated [default: 0.95,1].
    #[arg(long)]
    pub wss_targets: Option<String>,
}

impl MetricArgs {
    pub fn pairs(&self) -> Vec<(&'static str, Option<String>)> {
        vec![
            ("qrels", self.qrels.clone()),
            ("judgment_level", self.judgment_level.clone()),
            ("percents", self.percents.clone()),
            ("wss_targets", self.wss_targets.clone()),
        ]
    }
}
