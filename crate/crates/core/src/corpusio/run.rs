//! TREC run files: `topic_id Q0 doc_id rank score tag`.

use super::{read_to_string, write_atomic, CorpusError};
use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct RankedEntry {
    pub doc_id: String,
    /// 1-based.
    pub rank: usize,
    pub score: f64,
}

/// Scored documents for one topic, best first.
///
/// Ranks are `1..=n`, scores never increase with rank and each document
/// appears once.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedList {
    pub topic_id: String,
    pub tag: String,
    entries: Vec<RankedEntry>,
}

/// Descending score, ties broken by ascending doc id.
pub(crate) fn by_score_then_id(a: &(String, f64), b: &(String, f64)) -> Ordering {
    b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0))
}

impl RankedList {
    /// Sorts `scores` by descending score with ascending doc-id tiebreak and
    /// assigns ranks. Doc ids are expected to be unique.
    pub fn from_scores(
        topic_id: impl Into<String>,
        tag: impl Into<String>,
        scores: impl IntoIterator<Item = (String, f64)>,
    ) -> Self {
        let mut scores: Vec<(String, f64)> = scores.into_iter().collect();
        scores.sort_by(by_score_then_id);
        debug_assert!(
            scores.windows(2).all(|w| w[0].0 != w[1].0),
            "duplicate doc id in scores"
        );
        let entries = scores
            .into_iter()
            .enumerate()
            .map(|(i, (doc_id, score))| RankedEntry {
                doc_id,
                rank: i + 1,
                score,
            })
            .collect();
        Self {
            topic_id: topic_id.into(),
            tag: tag.into(),
            entries,
        }
    }

    /// Builds a list from entries in any order, checking the invariants.
    pub fn from_entries(
        topic_id: impl Into<String>,
        tag: impl Into<String>,
        mut entries: Vec<RankedEntry>,
    ) -> Result<Self, CorpusError> {
        let topic_id = topic_id.into();
        entries.sort_by_key(|e| e.rank);
        let mut seen = HashSet::with_capacity(entries.len());
        for (i, entry) in entries.iter().enumerate() {
            if entry.rank != i + 1 {
                return Err(CorpusError::NonContiguousRanks { topic: topic_id });
            }
            if !seen.insert(entry.doc_id.as_str()) {
                return Err(CorpusError::DuplicateRunDoc {
                    topic: topic_id,
                    doc: entry.doc_id.clone(),
                });
            }
            if i > 0 && entry.score > entries[i - 1].score {
                return Err(CorpusError::ScoreOrderViolation {
                    topic: topic_id,
                    rank: entry.rank,
                });
            }
        }
        Ok(Self {
            topic_id,
            tag: tag.into(),
            entries,
        })
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = tag.into();
        self
    }

    pub fn entries(&self) -> &[RankedEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.doc_id.as_str())
    }

    /// Doc id to score.
    pub fn score_map(&self) -> HashMap<&str, f64> {
        self.entries
            .iter()
            .map(|e| (e.doc_id.as_str(), e.score))
            .collect()
    }
}

fn check_tag(tag: &str) -> Result<(), CorpusError> {
    if tag.is_empty() || tag.chars().any(char::is_whitespace) {
        return Err(CorpusError::InvalidTag(tag.to_string()));
    }
    Ok(())
}

/// Formats lists as TREC run lines with 6-decimal scores. `tag` overrides
/// each list's own tag.
pub fn format_run(lists: &[RankedList], tag: Option<&str>) -> Result<String, CorpusError> {
    let mut out = String::new();
    for list in lists {
        let tag = tag.unwrap_or(&list.tag);
        check_tag(tag)?;
        for e in &list.entries {
            writeln!(
                out,
                "{} Q0 {} {} {:.6} {}",
                list.topic_id, e.doc_id, e.rank, e.score, tag
            )
            .expect("writing to a String");
        }
    }
    Ok(out)
}

pub fn write_run(lists: &[RankedList], path: &Path, tag: Option<&str>) -> Result<(), CorpusError> {
    write_atomic(path, format_run(lists, tag)?.as_bytes())
}

/// Parses a run file, grouping lines by topic in order of first appearance.
pub fn parse_run(text: &str) -> Result<Vec<RankedList>, CorpusError> {
    let mut order: Vec<String> = Vec::new();
    let mut groups: HashMap<String, (String, Vec<RankedEntry>)> = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let malformed = |reason: &str| CorpusError::MalformedLine {
            line: i + 1,
            reason: reason.to_string(),
        };
        if fields.len() != 6 {
            return Err(malformed("expected 6 columns: topic_id Q0 doc_id rank score tag"));
        }
        let rank: usize = fields[3]
            .parse()
            .map_err(|_| malformed("rank must be a positive integer"))?;
        let score: f64 = fields[4]
            .parse()
            .map_err(|_| malformed("score must be a number"))?;
        if !score.is_finite() {
            return Err(malformed("score must be finite"));
        }
        let topic = fields[0].to_string();
        let group = groups.entry(topic.clone()).or_insert_with(|| {
            order.push(topic);
            (fields[5].to_string(), Vec::new())
        });
        group.1.push(RankedEntry {
            doc_id: fields[2].to_string(),
            rank,
            score,
        });
    }
    order
        .into_iter()
        .map(|topic| {
            let (tag, entries) = groups.remove(&topic).expect("grouped topic");
            RankedList::from_entries(topic, tag, entries)
        })
        .collect()
}

pub fn read_run(path: &Path) -> Result<Vec<RankedList>, CorpusError> {
    parse_run(&read_to_string(path)?)
}
