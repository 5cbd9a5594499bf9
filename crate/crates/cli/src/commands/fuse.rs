use super::{fusion_policy, read_runs, topic_order};
use crate::config::Settings;
use crate::error::{CliResult, Context};
use screenprio::corpusio::{write_run, RankedList};
use screenprio::fuse::combsum;
use std::path::{Path, PathBuf};

/// Per topic, CombSUM over the lists of every input run that covers it.
pub fn fuse_runs(runs: &[Vec<RankedList>], settings: &Settings) -> CliResult<Vec<RankedList>> {
    let policy = fusion_policy(settings)?;
    topic_order(runs)
        .iter()
        .map(|topic| {
            let lists: Vec<RankedList> = runs.iter().flatten().filter(|l| &l.topic_id == topic).cloned().collect();
            combsum(&lists, policy).context(format!("topic `{topic}`"))
        })
        .collect()
}

pub fn cmd_fuse(settings: &Settings, paths: &[PathBuf], output: &Path, tag: &str) -> CliResult<()> {
    let runs = read_runs(paths)?;
    let fused = fuse_runs(&runs, settings)?;
    if let Some(dir) = output.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).context(format!("creating {}", dir.display()))?;
    }
    write_run(&fused, output, Some(tag)).context(format!("writing {}", output.display()))?;
    log::info!("fused {} runs into {}", paths.len(), output.display());
    Ok(())
}
