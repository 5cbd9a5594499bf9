use super::{judgments, read_runs, topic_order, write_text};
use crate::config::Settings;
use crate::error::{CliResult, Context};
use screenprio::corpusio::{write_run, RankedList};
use screenprio::fuse::oracle_select;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Writes the per-topic best run and a CSV report
/// `topic,choice,run_file,ap`, where `choice` is the 1-based position of
/// the chosen run on the command line.
pub fn cmd_oracle(
    settings: &Settings,
    paths: &[PathBuf],
    output: &Path,
    report: Option<&Path>,
    tag: &str,
) -> CliResult<()> {
    let judgments = judgments(settings)?;
    let runs = read_runs(paths)?;
    let mut chosen = Vec::new();
    let mut csv = String::from("topic,choice,run_file,ap\n");
    for topic in topic_order(&runs) {
        let (positions, lists): (Vec<usize>, Vec<RankedList>) = runs
            .iter()
            .enumerate()
            .filter_map(|(i, run)| run.iter().find(|l| l.topic_id == topic).map(|l| (i, l.clone())))
            .unzip();
        let choice = oracle_select(&lists, &judgments).context(format!("topic `{topic}`"))?;
        let position = positions[choice.index];
        let _ = writeln!(csv, "{topic},{},{},{:.4}", position + 1, paths[position].display(), choice.ap);
        chosen.push(choice.run.clone());
    }
    if let Some(dir) = output.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).context(format!("creating {}", dir.display()))?;
    }
    write_run(&chosen, output, Some(tag)).context(format!("writing {}", output.display()))?;
    match report {
        Some(path) => write_text(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}
