use super::{tokenize, LexError};
use crate::corpusio::Document;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Posting {
    /// Position of the document in [`Index::doc_ids`].
    pub doc: usize,
    pub tf: u32,
}

/// Immutable inverted index over one topic's candidate documents.
#[derive(Debug, Clone)]
pub struct Index {
    topic_id: String,
    doc_ids: Vec<String>,
    postings: HashMap<String, Vec<Posting>>,
    doc_lengths: Vec<usize>,
    collection_counts: HashMap<String, u64>,
    total_tokens: u64,
}

impl Index {
    /// Indexes `title + " " + abstract` of each document.
    pub fn build(topic_id: impl Into<String>, docs: &[Document]) -> Result<Self, LexError> {
        if docs.is_empty() {
            return Err(LexError::EmptyCorpus);
        }
        let mut postings: HashMap<String, Vec<Posting>> = HashMap::new();
        let mut collection_counts: HashMap<String, u64> = HashMap::new();
        let mut doc_lengths = Vec::with_capacity(docs.len());
        let mut total_tokens = 0u64;
        for (ordinal, doc) in docs.iter().enumerate() {
            let tokens = tokenize(&doc.text());
            doc_lengths.push(tokens.len());
            total_tokens += tokens.len() as u64;
            let mut tfs: HashMap<String, u32> = HashMap::new();
            for t in tokens {
                *tfs.entry(t).or_default() += 1;
            }
            for (token, tf) in tfs {
                *collection_counts.entry(token.clone()).or_default() += u64::from(tf);
                postings.entry(token).or_default().push(Posting { doc: ordinal, tf });
            }
        }
        Ok(Self {
            topic_id: topic_id.into(),
            doc_ids: docs.iter().map(|d| d.doc_id.clone()).collect(),
            postings,
            doc_lengths,
            collection_counts,
            total_tokens,
        })
    }

    pub fn topic_id(&self) -> &str {
        &self.topic_id
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn doc_count(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn doc_len(&self, doc: usize) -> usize {
        self.doc_lengths[doc]
    }

    pub fn doc_lengths(&self) -> &[usize] {
        &self.doc_lengths
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn avg_doc_len(&self) -> f64 {
        self.total_tokens as f64 / self.doc_count() as f64
    }

    /// Postings in document order, or `None` for an unseen token.
    pub fn postings(&self, token: &str) -> Option<&[Posting]> {
        self.postings.get(token).map(Vec::as_slice)
    }

    pub fn doc_freq(&self, token: &str) -> usize {
        self.postings.get(token).map_or(0, Vec::len)
    }

    pub fn collection_count(&self, token: &str) -> u64 {
        self.collection_counts.get(token).copied().unwrap_or(0)
    }

    pub fn vocabulary(&self) -> impl Iterator<Item = &str> {
        self.postings.keys().map(String::as_str)
    }

    /// Term frequency of `token` in the document at `doc`.
    pub fn tf(&self, token: &str, doc: usize) -> u32 {
        self.postings(token)
            .and_then(|ps| ps.iter().find(|p| p.doc == doc))
            .map_or(0, |p| p.tf)
    }
}
