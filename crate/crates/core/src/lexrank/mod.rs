//! Lexical baselines over a topic's candidate documents.
//!
//! An [`Index`] is built per topic; [`score_bm25`] and [`score_qlm_jm`]
//! score every indexed document (no cutoff) and return a full
//! [`RankedList`] with ties broken by ascending doc id.

mod index;

pub use index::{Index, Posting};

use crate::corpusio::RankedList;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LexError {
    #[error("cannot index an empty corpus")]
    EmptyCorpus,
    #[error("collection has no tokens; query likelihood is undefined")]
    EmptyCollection,
    #[error("invalid scorer parameter: {0}")]
    InvalidParams(String),
}

/// Lowercases and splits on every non-alphanumeric character. No stemming,
/// no stopwords.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScorerParams {
    pub bm25_k1: f64,
    pub bm25_b: f64,
    /// Weight of the document model in Jelinek-Mercer smoothing.
    pub qlm_lambda: f64,
}

impl Default for ScorerParams {
    fn default() -> Self {
        Self {
            bm25_k1: 1.5,
            bm25_b: 0.75,
            qlm_lambda: 0.5,
        }
    }
}

impl ScorerParams {
    pub fn validate(&self) -> Result<(), LexError> {
        if !(self.bm25_k1 > 0.0 && self.bm25_k1.is_finite()) {
            return Err(LexError::InvalidParams(format!("bm25_k1 = {} must be > 0", self.bm25_k1)));
        }
        if !(0.0..=1.0).contains(&self.bm25_b) {
            return Err(LexError::InvalidParams(format!("bm25_b = {} must be in [0, 1]", self.bm25_b)));
        }
        if !(self.qlm_lambda > 0.0 && self.qlm_lambda < 1.0) {
            return Err(LexError::InvalidParams(format!(
                "qlm_lambda = {} must be in (0, 1)",
                self.qlm_lambda
            )));
        }
        Ok(())
    }
}

fn ranked(index: &Index, tag: &str, scores: Vec<f64>) -> RankedList {
    RankedList::from_scores(
        index.topic_id(),
        tag,
        index.doc_ids().iter().cloned().zip(scores),
    )
}

/// Okapi BM25 with the `ln(1 + (N - df + 0.5) / (df + 0.5))` idf.
///
/// Out-of-vocabulary tokens contribute nothing; an empty query scores
/// every document 0.
pub fn score_bm25(index: &Index, query_tokens: &[String], params: &ScorerParams) -> Result<RankedList, LexError> {
    params.validate()?;
    let n = index.doc_count() as f64;
    let avg_len = index.avg_doc_len();
    let mut scores = vec![0.0; index.doc_count()];
    for token in query_tokens {
        let Some(postings) = index.postings(token) else { continue };
        let df = postings.len() as f64;
        let idf = ((n - df + 0.5) / (df + 0.5) + 1.0).ln();
        for p in postings {
            let tf = p.tf as f64;
            let len = index.doc_len(p.doc) as f64;
            // a posting implies len > 0, hence avg_len > 0
            let norm = params.bm25_k1 * (1.0 - params.bm25_b + params.bm25_b * len / avg_len);
            scores[p.doc] += idf * tf * (params.bm25_k1 + 1.0) / (tf + norm);
        }
    }
    Ok(ranked(index, "bm25", scores))
}

/// Query likelihood with Jelinek-Mercer smoothing:
/// `Σ ln(λ·tf/len + (1-λ)·cf/|C|)`.
///
/// Tokens absent from the collection would add `-inf` to every document
/// alike, so they are skipped. Any non-finite total left over is replaced
/// by the lowest finite score minus one.
pub fn score_qlm_jm(index: &Index, query_tokens: &[String], params: &ScorerParams) -> Result<RankedList, LexError> {
    params.validate()?;
    let total = index.total_tokens();
    if total == 0 && !query_tokens.is_empty() {
        return Err(LexError::EmptyCollection);
    }
    let lambda = params.qlm_lambda;
    let mut scores = vec![0.0; index.doc_count()];
    let mut tf_row = vec![0u32; index.doc_count()];
    for token in query_tokens {
        let cf = index.collection_count(token);
        if cf == 0 {
            continue;
        }
        let background = (1.0 - lambda) * (cf as f64 / total as f64);
        tf_row.iter_mut().for_each(|x| *x = 0);
        for p in index.postings(token).into_iter().flatten() {
            tf_row[p.doc] = p.tf;
        }
        for (doc, score) in scores.iter_mut().enumerate() {
            let len = index.doc_len(doc);
            let foreground = if len == 0 {
                0.0
            } else {
                lambda * (tf_row[doc] as f64 / len as f64)
            };
            *score += (foreground + background).ln();
        }
    }
    let floor = scores
        .iter()
        .copied()
        .filter(|s| s.is_finite())
        .fold(f64::INFINITY, f64::min);
    let floor = if floor.is_finite() { floor - 1.0 } else { 0.0 };
    for s in &mut scores {
        if !s.is_finite() {
            *s = floor;
        }
    }
    Ok(ranked(index, "qlm", scores))
}

#[cfg(test)]
mod tests;
