//! CombSUM fusion and oracle run selection.
//!
//! CombSUM scores a document by the sum of its scores across the input
//! lists; a document missing from a list contributes 0. Each document's
//! contributions are summed in a canonical order, so the output does not
//! depend on the order of the input lists, bit for bit.

use crate::corpusio::{Judgments, RankedList};
use crate::evalmetrics::{average_precision, MetricError};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Raw scores are summed.
    #[default]
    None,
    /// Each list is mapped to `[0, 1]` first; a constant list maps to 0.5.
    MinMax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FusionPolicy {
    pub normalization: Normalization,
}

impl FusionPolicy {
    pub fn min_max() -> Self {
        Self {
            normalization: Normalization::MinMax,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuseError {
    #[error("nothing to fuse")]
    EmptyInput,
    #[error("cannot fuse lists of topic `{found}` with topic `{expected}`")]
    TopicMismatch { expected: String, found: String },
    #[error("topic `{0}` has no relevant documents; oracle selection is undefined")]
    NoJudgedRelevant(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

fn normalized(list: &RankedList, normalization: Normalization) -> Vec<(&str, f64)> {
    let raw = list.entries().iter().map(|e| (e.doc_id.as_str(), e.score));
    match normalization {
        Normalization::None => raw.collect(),
        Normalization::MinMax => {
            let (lo, hi) = list
                .entries()
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| {
                    (lo.min(e.score), hi.max(e.score))
                });
            let span = hi - lo;
            raw.map(|(d, s)| (d, if span > 0.0 { (s - lo) / span } else { 0.5 }))
                .collect()
        }
    }
}

/// Fuses lists of one topic. The result is tagged `combsum`.
pub fn combsum(lists: &[RankedList], policy: FusionPolicy) -> Result<RankedList, FuseError> {
    let first = lists.first().ok_or(FuseError::EmptyInput)?;
    if let Some(other) = lists.iter().find(|l| l.topic_id != first.topic_id) {
        return Err(FuseError::TopicMismatch {
            expected: first.topic_id.clone(),
            found: other.topic_id.clone(),
        });
    }
    let mut contributions: HashMap<&str, Vec<f64>> = HashMap::new();
    for list in lists {
        for (doc, score) in normalized(list, policy.normalization) {
            contributions.entry(doc).or_default().push(score);
        }
    }
    let fused = contributions.into_iter().map(|(doc, mut parts)| {
        parts.sort_by(f64::total_cmp);
        (doc.to_string(), parts.into_iter().sum::<f64>())
    });
    Ok(RankedList::from_scores(first.topic_id.clone(), "combsum", fused))
}

/// Sums the scores of all generated-query runs of a topic.
pub fn fuse_multi(gen_runs: &[RankedList]) -> Result<RankedList, FuseError> {
    combsum(gen_runs, FusionPolicy::default())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleChoice<'a> {
    /// Position of the chosen run in the input.
    pub index: usize,
    pub run: &'a RankedList,
    pub ap: f64,
}

/// Picks the run with the highest AP for its topic; the earliest run wins
/// ties.
pub fn oracle_select<'a>(gen_runs: &'a [RankedList], judgments: &Judgments) -> Result<OracleChoice<'a>, FuseError> {
    let mut best: Option<OracleChoice<'a>> = None;
    for (index, run) in gen_runs.iter().enumerate() {
        if let Some(b) = &best {
            if run.topic_id != b.run.topic_id {
                return Err(FuseError::TopicMismatch {
                    expected: b.run.topic_id.clone(),
                    found: run.topic_id.clone(),
                });
            }
        }
        let ap = match average_precision(run, judgments) {
            Ok(ap) => ap,
            Err(MetricError::NoJudgedRelevant(t)) => return Err(FuseError::NoJudgedRelevant(t)),
            Err(e) => return Err(e.into()),
        };
        if best.as_ref().is_none_or(|b| ap > b.ap) {
            best = Some(OracleChoice { index, run, ap });
        }
    }
    best.ok_or(FuseError::EmptyInput)
}
