//! Screening-prioritisation metrics: AP, Last_Rel, Recall@k% and WSS@r.
//!
//! All metrics read ranks only. A document is relevant when its grade is
//! above zero; unjudged documents count as non-relevant. `N` is the length
//! of the run being scored.
//!
//! Rules where the usual definitions leave room:
//!
//! - Relevant documents missing from the run contribute nothing to AP and
//!   recall; they push Last_Rel (and the WSS recall rank) to `N`.
//! - The recall cutoff is `ceil(p/100 * N)` and the WSS target is
//!   `ceil(r * R)` relevant documents.
//! - A topic with no relevant documents has no defined value
//!   ([`MetricError::NoJudgedRelevant`]).

mod report;

pub use report::{evaluate_runs, MeanMetrics, MetricReport, MetricSettings, TopicMetrics};

use crate::corpusio::{Judgments, RankedList};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("topic `{0}` has no relevant documents")]
    NoJudgedRelevant(String),
    #[error("no judgments for topic `{0}`")]
    MissingJudgments(String),
    #[error("run for topic `{0}` is empty")]
    EmptyRun(String),
    #[error("topic `{0}` appears more than once in the run")]
    DuplicateTopic(String),
    #[error("recall cutoff {0}% must be in (0, 100]")]
    InvalidPercent(f64),
    #[error("recall target {0} must be in (0, 1]")]
    InvalidRecallTarget(f64),
}

/// Ceiling that ignores floating noise just above an integer
/// (`0.95 * 60` is 57.00000000000001 in binary floating point).
fn snapped_ceil(x: f64) -> usize {
    let nearest = x.round();
    if (x - nearest).abs() < 1e-9 {
        nearest as usize
    } else {
        x.ceil() as usize
    }
}

/// Relevance flags along the run plus `R`.
struct Judged {
    flags: Vec<bool>,
    relevant: usize,
}

impl Judged {
    fn new(run: &RankedList, judgments: &Judgments) -> Result<Self, MetricError> {
        let topic = &run.topic_id;
        let relevant = judgments.relevant_count(topic);
        if relevant == 0 {
            return Err(MetricError::NoJudgedRelevant(topic.clone()));
        }
        if run.is_empty() {
            return Err(MetricError::EmptyRun(topic.clone()));
        }
        let flags = run
            .doc_ids()
            .map(|d| judgments.is_relevant(topic, d))
            .collect();
        Ok(Self { flags, relevant })
    }

    fn n(&self) -> usize {
        self.flags.len()
    }

    /// 1-based rank at which the `target`-th relevant document appears.
    fn rank_of_nth_relevant(&self, target: usize) -> Option<usize> {
        let mut hits = 0;
        for (i, &rel) in self.flags.iter().enumerate() {
            if rel {
                hits += 1;
                if hits >= target {
                    return Some(i + 1);
                }
            }
        }
        None
    }

    fn ap(&self) -> f64 {
        let mut hits = 0usize;
        let mut sum = 0.0;
        for (i, &rel) in self.flags.iter().enumerate() {
            if rel {
                hits += 1;
                sum += hits as f64 / (i + 1) as f64;
            }
        }
        sum / self.relevant as f64
    }

    fn last_rel(&self) -> usize {
        self.rank_of_nth_relevant(self.relevant).unwrap_or(self.n())
    }

    fn recall_at(&self, percent: f64) -> f64 {
        let cutoff = snapped_ceil(percent * self.n() as f64 / 100.0).min(self.n());
        let hits = self.flags[..cutoff].iter().filter(|&&r| r).count();
        hits as f64 / self.relevant as f64
    }

    fn wss(&self, target: f64) -> f64 {
        let needed = snapped_ceil(target * self.relevant as f64).max(1);
        let rank = self.rank_of_nth_relevant(needed).unwrap_or(self.n());
        let n = self.n() as f64;
        (n - rank as f64) / n - (1.0 - target)
    }
}

fn check_percent(p: f64) -> Result<(), MetricError> {
    if p > 0.0 && p <= 100.0 {
        Ok(())
    } else {
        Err(MetricError::InvalidPercent(p))
    }
}

fn check_target(r: f64) -> Result<(), MetricError> {
    if r > 0.0 && r <= 1.0 {
        Ok(())
    } else {
        Err(MetricError::InvalidRecallTarget(r))
    }
}

/// `(1/R) Σ_{relevant at rank k} (relevant in top k) / k`.
pub fn average_precision(run: &RankedList, judgments: &Judgments) -> Result<f64, MetricError> {
    Ok(Judged::new(run, judgments)?.ap())
}

/// Rank of the deepest relevant document, or `N` if one is missing.
pub fn last_rel(run: &RankedList, judgments: &Judgments) -> Result<usize, MetricError> {
    Ok(Judged::new(run, judgments)?.last_rel())
}

/// Fraction of relevant documents in the top `ceil(p/100 * N)`.
pub fn recall_at_percent(run: &RankedList, judgments: &Judgments, percent: f64) -> Result<f64, MetricError> {
    check_percent(percent)?;
    Ok(Judged::new(run, judgments)?.recall_at(percent))
}

/// Work saved over sampling at recall `target`:
/// `(N - rank_r)/N - (1 - target)`, where `rank_r` is the rank at which
/// `ceil(target * R)` relevant documents have been seen.
pub fn wss(run: &RankedList, judgments: &Judgments, target: f64) -> Result<f64, MetricError> {
    check_target(target)?;
    Ok(Judged::new(run, judgments)?.wss(target))
}
