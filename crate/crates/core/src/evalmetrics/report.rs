use super::{check_percent, check_target, Judged, MetricError};
use crate::corpusio::{Judgments, RankedList};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSettings {
    /// Recall cutoffs in percent of the run length.
    pub percents: Vec<f64>,
    /// WSS recall targets as fractions.
    pub wss_targets: Vec<f64>,
}

impl Default for MetricSettings {
    fn default() -> Self {
        Self {
            percents: vec![1.0, 5.0, 10.0, 20.0],
            wss_targets: vec![0.95, 1.0],
        }
    }
}

impl MetricSettings {
    pub fn validate(&self) -> Result<(), MetricError> {
        self.percents.iter().try_for_each(|&p| check_percent(p))?;
        self.wss_targets.iter().try_for_each(|&r| check_target(r))
    }

    fn columns(&self) -> Vec<String> {
        let mut cols = vec!["ap".to_string(), "last_rel".to_string()];
        cols.extend(self.percents.iter().map(|p| format!("recall@{}", trim_number(*p))));
        cols.extend(self.wss_targets.iter().map(|r| format!("wss{}", trim_number(r * 100.0))));
        cols
    }
}

/// `5.0` -> `5`, `2.5` -> `2.5`.
fn trim_number(x: f64) -> String {
    let rounded = x.round();
    if (x - rounded).abs() < 1e-9 {
        format!("{}", rounded as i64)
    } else {
        format!("{x}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopicMetrics {
    pub ap: f64,
    pub last_rel: usize,
    /// One value per configured percent, same order.
    pub recall_at: Vec<f64>,
    /// One value per configured WSS target, same order.
    pub wss: Vec<f64>,
    pub run_len: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanMetrics {
    pub ap: f64,
    pub last_rel: f64,
    pub recall_at: Vec<f64>,
    pub wss: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub run_tag: String,
    pub settings: MetricSettings,
    pub per_topic: BTreeMap<String, TopicMetrics>,
    /// Topics with no relevant documents; left out of the means.
    pub excluded: Vec<String>,
    /// `None` when every topic was excluded.
    pub mean: Option<MeanMetrics>,
}

/// Evaluates one run (one list per topic).
pub fn evaluate_runs(
    runs: &[RankedList],
    judgments: &Judgments,
    settings: &MetricSettings,
) -> Result<MetricReport, MetricError> {
    settings.validate()?;
    let mut per_topic = BTreeMap::new();
    let mut excluded = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for run in runs {
        let topic = &run.topic_id;
        if !seen.insert(topic.as_str()) {
            return Err(MetricError::DuplicateTopic(topic.clone()));
        }
        if !judgments.has_topic(topic) {
            return Err(MetricError::MissingJudgments(topic.clone()));
        }
        let judged = match Judged::new(run, judgments) {
            Ok(j) => j,
            Err(MetricError::NoJudgedRelevant(t)) => {
                excluded.push(t);
                continue;
            }
            Err(e) => return Err(e),
        };
        per_topic.insert(
            topic.clone(),
            TopicMetrics {
                ap: judged.ap(),
                last_rel: judged.last_rel(),
                recall_at: settings.percents.iter().map(|&p| judged.recall_at(p)).collect(),
                wss: settings.wss_targets.iter().map(|&r| judged.wss(r)).collect(),
                run_len: judged.n(),
            },
        );
    }
    excluded.sort();

    let mean = (!per_topic.is_empty()).then(|| {
        let n = per_topic.len() as f64;
        let avg = |f: &dyn Fn(&TopicMetrics) -> f64| per_topic.values().map(f).sum::<f64>() / n;
        MeanMetrics {
            ap: avg(&|m| m.ap),
            last_rel: avg(&|m| m.last_rel as f64),
            recall_at: (0..settings.percents.len()).map(|i| avg(&|m| m.recall_at[i])).collect(),
            wss: (0..settings.wss_targets.len()).map(|i| avg(&|m| m.wss[i])).collect(),
        }
    });

    Ok(MetricReport {
        run_tag: runs.first().map(|r| r.tag.clone()).unwrap_or_default(),
        settings: settings.clone(),
        per_topic,
        excluded,
        mean,
    })
}

impl MetricReport {
    pub fn csv_header(&self) -> String {
        format!("run,topic,{}", self.settings.columns().join(","))
    }

    /// Topic rows sorted by topic id, then a `MEAN` row. Values use four
    /// decimals; per-topic Last_Rel is an integer.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for (topic, m) in &self.per_topic {
            let _ = write!(out, "{},{},{:.4},{}", self.run_tag, topic, m.ap, m.last_rel);
            for v in m.recall_at.iter().chain(&m.wss) {
                let _ = write!(out, ",{v:.4}");
            }
            out.push('\n');
        }
        if let Some(m) = &self.mean {
            let _ = write!(out, "{},MEAN,{:.4},{:.4}", self.run_tag, m.ap, m.last_rel);
            for v in m.recall_at.iter().chain(&m.wss) {
                let _ = write!(out, ",{v:.4}");
            }
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        format!("{}\n{}", self.csv_header(), self.csv_rows())
    }

    /// Machine-readable summary: run tag, topic counts, excluded topics and
    /// the means keyed by CSV column name.
    pub fn summary(&self) -> Value {
        let mut means = Map::new();
        if let Some(m) = &self.mean {
            let values = [m.ap, m.last_rel]
                .into_iter()
                .chain(m.recall_at.iter().copied())
                .chain(m.wss.iter().copied());
            for (col, v) in self.settings.columns().into_iter().zip(values) {
                means.insert(col, json!(v));
            }
        }
        json!({
            "run": self.run_tag,
            "topics_evaluated": self.per_topic.len(),
            "excluded_topics": self.excluded,
            "mean": means,
        })
    }
}
