mod eval;
mod fuse;
mod generate;
mod oracle;
mod pipeline;
mod rank;

pub use eval::cmd_eval;
pub use fuse::cmd_fuse;
pub use generate::cmd_generate;
pub use oracle::cmd_oracle;
pub use pipeline::cmd_pipeline;
pub use rank::cmd_rank;

use crate::config::Settings;
use crate::error::{usage, CliResult, Context};
use screenprio::corpusio::{load_qrels, read_run, JudgmentLevel, Judgments, RankedList};
use screenprio::evalmetrics::MetricSettings;
use screenprio::fuse::FusionPolicy;
use std::path::{Path, PathBuf};

const DEFAULT_THREADS: usize = 4;

pub fn thread_pool(settings: &Settings) -> CliResult<rayon::ThreadPool> {
    let threads = settings.parsed_or("threads", DEFAULT_THREADS)?;
    if threads == 0 {
        return Err(usage("threads must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| usage(format!("cannot start worker pool: {e}")))
}

pub fn judgments(settings: &Settings) -> CliResult<Judgments> {
    let level = match settings.get("judgment_level").unwrap_or("abstract") {
        "abstract" => JudgmentLevel::Abstract,
        "fulltext" | "full-text" => JudgmentLevel::FullText,
        other => return Err(usage(format!("judgment_level `{other}` is not abstract or fulltext"))),
    };
    let path = settings.existing_path("qrels")?;
    load_qrels(&path, level).context(format!("qrels {}", path.display()))
}

pub fn metric_settings(settings: &Settings) -> CliResult<MetricSettings> {
    let mut metrics = MetricSettings::default();
    if let Some(p) = settings.list("percents")? {
        metrics.percents = p;
    }
    if let Some(r) = settings.list("wss_targets")? {
        metrics.wss_targets = r;
    }
    metrics.validate().map_err(usage)?;
    Ok(metrics)
}

pub fn fusion_policy(settings: &Settings) -> CliResult<FusionPolicy> {
    match settings.get("normalize").unwrap_or("none") {
        "none" => Ok(FusionPolicy::default()),
        "minmax" => Ok(FusionPolicy::min_max()),
        other => Err(usage(format!("normalize `{other}` is not none or minmax"))),
    }
}

/// Reads run files given on the command line; missing files are usage errors.
pub fn read_runs(paths: &[PathBuf]) -> CliResult<Vec<Vec<RankedList>>> {
    paths
        .iter()
        .map(|path| {
            if !path.exists() {
                return Err(usage(format!("run file {} does not exist", path.display())));
            }
            read_run(path).context(format!("run {}", path.display()))
        })
        .collect()
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).context(format!("creating {}", dir.display()))?;
    }
    screenprio::corpusio::write_atomic(path, text.as_bytes()).context(format!("writing {}", path.display()))
}

/// Topic ids in order of first appearance across runs.
pub fn topic_order(runs: &[Vec<RankedList>]) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    runs.iter()
        .flatten()
        .filter(|l| seen.insert(l.topic_id.clone()))
        .map(|l| l.topic_id.clone())
        .collect()
}
