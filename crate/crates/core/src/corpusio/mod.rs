//! File formats and the data types every stage passes around.
//!
//! | file              | layout                                                        |
//! |-------------------|---------------------------------------------------------------|
//! | corpus            | JSON lines `{"doc_id", "title", "abstract"}`                  |
//! | topics            | JSON lines `{"topic_id", "boolean", "title"?, "working_title"?}` |
//! | qrels             | `topic_id 0 doc_id grade` (TREC, whitespace separated)        |
//! | runs              | `topic_id Q0 doc_id rank score tag` (TREC)                    |
//! | candidates        | `topic_id doc_id`                                             |
//! | generated queries | JSON lines, one per variant (see [`queries`])                 |
//!
//! All files are UTF-8. Writers go through [`write_atomic`].

mod queries;
mod run;

pub use queries::{
    format_generated, parse_generated, read_generated, GeneratedQuerySet, GenerationMode,
    QueryRecord,
};
pub use run::{format_run, parse_run, read_run, write_run, RankedEntry, RankedList};

use crate::boolquery::{parse_boolean, ParseError};
use serde::Deserialize;
use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed record on line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("malformed line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("duplicate document id `{0}`")]
    DuplicateDocId(String),
    #[error("duplicate topic id `{0}`")]
    DuplicateTopic(String),
    #[error("duplicate judgment for topic `{topic}`, document `{doc}`")]
    DuplicatePair { topic: String, doc: String },
    #[error("topic `{topic}`: ranks are not contiguous from 1")]
    NonContiguousRanks { topic: String },
    #[error("topic `{topic}`: score at rank {rank} is higher than the score above it")]
    ScoreOrderViolation { topic: String, rank: usize },
    #[error("topic `{topic}`: document `{doc}` ranked twice")]
    DuplicateRunDoc { topic: String, doc: String },
    #[error("run tag `{0}` must be non-empty and free of whitespace")]
    InvalidTag(String),
    #[error("topic `{topic}`: {source}")]
    InvalidBoolean {
        topic: String,
        #[source]
        source: ParseError,
    },
    #[error("generated queries for topic `{topic}` ({model_tag}): {reason}")]
    InvalidQuerySet {
        topic: String,
        model_tag: String,
        reason: String,
    },
}

impl CorpusError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CorpusError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

pub(crate) fn read_to_string(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|e| CorpusError::io(path, e))
}

/// Writes `contents` to a temporary file next to `path`, then renames it
/// into place so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CorpusError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CorpusError::io(path, e))?;
    tmp.write_all(contents)
        .and_then(|_| tmp.flush())
        .map_err(|e| CorpusError::io(path, e))?;
    tmp.persist(path).map_err(|e| CorpusError::io(path, e.error))?;
    Ok(())
}

/// One candidate document.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub title: String,
    #[serde(rename = "abstract", default)]
    pub abstract_text: String,
}

impl Document {
    pub fn new(doc_id: impl Into<String>, title: impl Into<String>, abstract_text: impl Into<String>) -> Self {
        Self {
            doc_id: doc_id.into(),
            title: title.into(),
            abstract_text: abstract_text.into(),
        }
    }

    /// Title and abstract joined by a space; the text that gets indexed.
    pub fn text(&self) -> String {
        format!("{} {}", self.title, self.abstract_text)
    }
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && !id.chars().any(char::is_whitespace)
}

/// Parses a corpus file body. Line numbers in errors are 1-based.
pub fn parse_corpus(text: &str) -> Result<Vec<Document>, CorpusError> {
    let mut seen = HashSet::new();
    let mut docs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document = serde_json::from_str(line).map_err(|e| CorpusError::MalformedRecord {
            line: i + 1,
            reason: e.to_string(),
        })?;
        if !valid_id(&doc.doc_id) {
            return Err(CorpusError::MalformedRecord {
                line: i + 1,
                reason: "doc_id must be non-empty and contain no whitespace".into(),
            });
        }
        if !seen.insert(doc.doc_id.clone()) {
            return Err(CorpusError::DuplicateDocId(doc.doc_id));
        }
        docs.push(doc);
    }
    Ok(docs)
}

pub fn load_corpus(path: &Path) -> Result<Vec<Document>, CorpusError> {
    parse_corpus(&read_to_string(path)?)
}

/// One systematic review.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct Topic {
    pub topic_id: String,
    #[serde(rename = "boolean")]
    pub boolean_query_raw: String,
    #[serde(rename = "title", default)]
    pub final_title: Option<String>,
    #[serde(default)]
    pub working_title: Option<String>,
}

/// Parses a topics file; every Boolean query must parse.
pub fn parse_topics(text: &str) -> Result<Vec<Topic>, CorpusError> {
    let mut seen = HashSet::new();
    let mut topics = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let topic: Topic = serde_json::from_str(line).map_err(|e| CorpusError::MalformedRecord {
            line: i + 1,
            reason: e.to_string(),
        })?;
        if !valid_id(&topic.topic_id) {
            return Err(CorpusError::MalformedRecord {
                line: i + 1,
                reason: "topic_id must be non-empty and contain no whitespace".into(),
            });
        }
        parse_boolean(&topic.boolean_query_raw).map_err(|source| CorpusError::InvalidBoolean {
            topic: topic.topic_id.clone(),
            source,
        })?;
        if !seen.insert(topic.topic_id.clone()) {
            return Err(CorpusError::DuplicateTopic(topic.topic_id));
        }
        topics.push(topic);
    }
    Ok(topics)
}

pub fn load_topics(path: &Path) -> Result<Vec<Topic>, CorpusError> {
    parse_topics(&read_to_string(path)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JudgmentLevel {
    #[default]
    Abstract,
    FullText,
}

/// Relevance grades per topic and document. Grade > 0 means relevant.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Judgments {
    pub level: JudgmentLevel,
    grades: BTreeMap<String, BTreeMap<String, u32>>,
}

impl Judgments {
    pub fn new(level: JudgmentLevel) -> Self {
        Self {
            level,
            grades: BTreeMap::new(),
        }
    }

    /// Adds one judgment; a repeated pair is an error.
    pub fn insert(&mut self, topic: &str, doc: &str, grade: u32) -> Result<(), CorpusError> {
        let docs = self.grades.entry(topic.to_string()).or_default();
        if docs.insert(doc.to_string(), grade).is_some() {
            return Err(CorpusError::DuplicatePair {
                topic: topic.to_string(),
                doc: doc.to_string(),
            });
        }
        Ok(())
    }

    pub fn topic(&self, topic: &str) -> Option<&BTreeMap<String, u32>> {
        self.grades.get(topic)
    }

    pub fn has_topic(&self, topic: &str) -> bool {
        self.grades.contains_key(topic)
    }

    pub fn topics(&self) -> impl Iterator<Item = &str> {
        self.grades.keys().map(String::as_str)
    }

    pub fn grade(&self, topic: &str, doc: &str) -> Option<u32> {
        self.grades.get(topic)?.get(doc).copied()
    }

    pub fn is_relevant(&self, topic: &str, doc: &str) -> bool {
        self.grade(topic, doc).is_some_and(|g| g > 0)
    }

    /// Number of judged-relevant documents for `topic` (0 when unknown).
    pub fn relevant_count(&self, topic: &str) -> usize {
        self.grades
            .get(topic)
            .map_or(0, |docs| docs.values().filter(|&&g| g > 0).count())
    }
}

/// Parses TREC qrels: `topic_id iteration doc_id grade`.
pub fn parse_qrels(text: &str, level: JudgmentLevel) -> Result<Judgments, CorpusError> {
    let mut judgments = Judgments::new(level);
    for (i, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let malformed = |reason: &str| CorpusError::MalformedLine {
            line: i + 1,
            reason: reason.to_string(),
        };
        if fields.len() != 4 {
            return Err(malformed("expected 4 columns: topic_id 0 doc_id grade"));
        }
        let grade: u32 = fields[3]
            .parse()
            .map_err(|_| malformed("grade must be a non-negative integer"))?;
        judgments.insert(fields[0], fields[2], grade)?;
    }
    Ok(judgments)
}

pub fn load_qrels(path: &Path, level: JudgmentLevel) -> Result<Judgments, CorpusError> {
    parse_qrels(&read_to_string(path)?, level)
}

/// Candidate documents per topic, in file order, from `topic_id doc_id` lines.
pub fn parse_candidates(text: &str) -> Result<BTreeMap<String, Vec<String>>, CorpusError> {
    let mut out: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut seen = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            [] => continue,
            [topic, doc] => {
                if seen.insert((topic.to_string(), doc.to_string())) {
                    out.entry(topic.to_string()).or_default().push(doc.to_string());
                }
            }
            _ => {
                return Err(CorpusError::MalformedLine {
                    line: i + 1,
                    reason: "expected 2 columns: topic_id doc_id".into(),
                })
            }
        }
    }
    Ok(out)
}

pub fn load_candidates(path: &Path) -> Result<BTreeMap<String, Vec<String>>, CorpusError> {
    parse_candidates(&read_to_string(path)?)
}
