use super::{judgments, metric_settings, read_runs, write_text};
use crate::config::Settings;
use crate::error::{CliResult, Context};
use screenprio::evalmetrics::{evaluate_runs, MetricReport};
use std::path::{Path, PathBuf};

/// One report per run file, in the given order.
pub fn evaluate_files(settings: &Settings, paths: &[PathBuf]) -> CliResult<Vec<MetricReport>> {
    let judgments = judgments(settings)?;
    let metrics = metric_settings(settings)?;
    let runs = read_runs(paths)?;
    runs.iter()
        .zip(paths)
        .map(|(lists, path)| evaluate_runs(lists, &judgments, &metrics).context(format!("run {}", path.display())))
        .collect()
}

/// CSV with one header line, then every report's topic rows and MEAN row.
pub fn reports_csv(reports: &[MetricReport]) -> String {
    let mut out = String::new();
    if let Some(first) = reports.first() {
        out.push_str(&first.csv_header());
        out.push('\n');
    }
    for r in reports {
        out.push_str(&r.csv_rows());
    }
    out
}

pub fn cmd_eval(settings: &Settings, paths: &[PathBuf], output: Option<&Path>, summary: Option<&Path>) -> CliResult<()> {
    let reports = evaluate_files(settings, paths)?;
    for r in &reports {
        if !r.excluded.is_empty() {
            log::warn!("run {}: no relevant documents for {}; left out of the means", r.run_tag, r.excluded.join(", "));
        }
    }
    let csv = reports_csv(&reports);
    match output {
        Some(path) => write_text(path, &csv)?,
        None => print!("{csv}"),
    }
    if let Some(path) = summary {
        let value = serde_json::Value::Array(reports.iter().map(MetricReport::summary).collect());
        write_text(path, &(serde_json::to_string_pretty(&value)? + "\n"))?;
    }
    Ok(())
}
