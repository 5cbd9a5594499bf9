//! Generated-query records.
//!
//! One JSON object per line and per variant:
//!
//! ```text
//! {"topic_id":"CD008054","model_tag":"gpt-3.5-turbo","mode":"multi","variant":3,"query":"..."}
//! ```
//!
//! The variants of one `(topic_id, model_tag, mode)` key form a
//! [`GeneratedQuerySet`]; they must appear with indices `0..n` in order.

use super::{read_to_string, CorpusError};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenerationMode {
    /// One near-deterministic generation.
    Single,
    /// Several high-temperature generations.
    Multi,
}

impl fmt::Display for GenerationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenerationMode::Single => "single",
            GenerationMode::Multi => "multi",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedQuerySet {
    pub topic_id: String,
    pub model_tag: String,
    pub mode: GenerationMode,
    pub queries: Vec<String>,
}

impl GeneratedQuerySet {
    /// Single mode holds exactly one query, multi mode at least one.
    pub fn validate(&self) -> Result<(), CorpusError> {
        let reason = match (self.mode, self.queries.len()) {
            (GenerationMode::Single, 1) => None,
            (GenerationMode::Single, n) => Some(format!("single mode needs 1 query, found {n}")),
            (GenerationMode::Multi, 0) => Some("multi mode needs at least 1 query".to_string()),
            _ => None,
        };
        match reason {
            Some(reason) => Err(CorpusError::InvalidQuerySet {
                topic: self.topic_id.clone(),
                model_tag: self.model_tag.clone(),
                reason,
            }),
            None => Ok(()),
        }
    }

    pub fn key(&self) -> (String, String, GenerationMode) {
        (self.topic_id.clone(), self.model_tag.clone(), self.mode)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub topic_id: String,
    pub model_tag: String,
    pub mode: GenerationMode,
    pub variant: usize,
    pub query: String,
}

/// Parses generated-query records into sets, in order of first appearance.
pub fn parse_generated(text: &str) -> Result<Vec<GeneratedQuerySet>, CorpusError> {
    let mut sets: Vec<GeneratedQuerySet> = Vec::new();
    let mut index: HashMap<(String, String, GenerationMode), usize> = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |reason: String| CorpusError::MalformedRecord { line: i + 1, reason };
        let rec: QueryRecord = serde_json::from_str(line).map_err(|e| malformed(e.to_string()))?;
        let key = (rec.topic_id.clone(), rec.model_tag.clone(), rec.mode);
        let slot = *index.entry(key).or_insert_with(|| {
            sets.push(GeneratedQuerySet {
                topic_id: rec.topic_id.clone(),
                model_tag: rec.model_tag.clone(),
                mode: rec.mode,
                queries: Vec::new(),
            });
            sets.len() - 1
        });
        let set = &mut sets[slot];
        if rec.variant != set.queries.len() {
            return Err(malformed(format!(
                "expected variant {} for topic `{}`, found {}",
                set.queries.len(),
                rec.topic_id,
                rec.variant
            )));
        }
        set.queries.push(rec.query);
    }
    for set in &sets {
        set.validate()?;
    }
    Ok(sets)
}

pub fn read_generated(path: &Path) -> Result<Vec<GeneratedQuerySet>, CorpusError> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    parse_generated(&read_to_string(path)?)
}

/// Serialises sets as record lines.
pub fn format_generated(sets: &[GeneratedQuerySet]) -> String {
    let mut out = String::new();
    for set in sets {
        for (variant, query) in set.queries.iter().enumerate() {
            let rec = QueryRecord {
                topic_id: set.topic_id.clone(),
                model_tag: set.model_tag.clone(),
                mode: set.mode,
                variant,
                query: query.clone(),
            };
            out.push_str(&serde_json::to_string(&rec).expect("record serialises"));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(topic: &str, mode: GenerationMode, n: usize) -> GeneratedQuerySet {
        GeneratedQuerySet {
            topic_id: topic.into(),
            model_tag: "m".into(),
            mode,
            queries: (0..n).map(|i| format!("query {i}\nwith \"quotes\"")).collect(),
        }
    }

    #[test]
    fn round_trip() {
        let sets = vec![set("t1", GenerationMode::Single, 1), set("t1", GenerationMode::Multi, 10)];
        let text = format_generated(&sets);
        assert_eq!(text.lines().count(), 11);
        assert_eq!(parse_generated(&text).unwrap(), sets);
    }

    #[test]
    fn single_mode_needs_one_query() {
        let bad = set("t1", GenerationMode::Single, 2);
        let text = format_generated(&[bad]);
        assert!(matches!(parse_generated(&text), Err(CorpusError::InvalidQuerySet { .. })));
    }

    #[test]
    fn corrupted_line() {
        let mut text = format_generated(&[set("t1", GenerationMode::Single, 1)]);
        text.push_str("{\"topic_id\": \"t2\", \"mode\n");
        assert!(matches!(
            parse_generated(&text),
            Err(CorpusError::MalformedRecord { line: 2, .. })
        ));
    }

    #[test]
    fn variants_must_be_in_order() {
        let text = r#"{"topic_id":"t","model_tag":"m","mode":"multi","variant":1,"query":"q"}"#;
        assert!(matches!(parse_generated(text), Err(CorpusError::MalformedRecord { line: 1, .. })));
    }

    #[test]
    fn missing_file_is_empty() {
        let dir = tempfile::tempdir().unwrap();
        assert!(read_generated(&dir.path().join("none.jsonl")).unwrap().is_empty());
    }
}
