use super::eval::cmd_eval;
use super::fuse::cmd_fuse;
use super::generate::cmd_generate;
use super::rank::{cmd_rank, RankPlan, Source};
use crate::config::Settings;
use crate::error::CliResult;
use std::path::PathBuf;

/// generate (generated source only) -> rank -> fuse (several variants
/// only) -> eval (when qrels are configured). Outputs land in `runs_dir`:
/// the runs, `{scorer}-{source}-fused.run`, `eval.csv` and `summary.json`.
pub fn cmd_pipeline(settings: &Settings) -> CliResult<()> {
    let plan = RankPlan::from_settings(settings)?;
    if plan.source == Source::Generated {
        cmd_generate(settings)?;
    }
    let mut runs = cmd_rank(settings)?;
    let runs_dir = PathBuf::from(settings.require("runs_dir")?);
    if runs.len() > 1 {
        let tag = format!("{}-fused", plan.tag(None));
        let fused = runs_dir.join(format!("{tag}.run"));
        cmd_fuse(settings, &runs, &fused, &tag)?;
        runs.push(fused);
    }
    for r in &runs {
        println!("{}", r.display());
    }
    if settings.get("qrels").is_some() {
        let csv = runs_dir.join("eval.csv");
        cmd_eval(settings, &runs, Some(&csv), Some(&runs_dir.join("summary.json")))?;
        println!("{}", csv.display());
    }
    Ok(())
}
