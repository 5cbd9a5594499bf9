//! Screening prioritisation for systematic reviews driven by the review's
//! Boolean query.
//!
//! The crate covers the whole batch pipeline:
//!
//! - [`boolquery`]: PubMed-dialect Boolean query parser, renderer and term extraction.
//! - [`corpusio`]: documents, topics, qrels, generated queries and TREC run files.
//! - [`lexrank`]: in-memory inverted index with BM25 and Jelinek-Mercer query likelihood.
//! - [`clf`]: clause-wise fusion baseline over the Boolean query structure.
//! - [`genquery`]: prompt construction and a cached client for generation endpoints.
//! - [`fuse`]: CombSUM fusion and oracle run selection.
//! - [`evalmetrics`]: AP, Last_Rel, Recall@k%, WSS and report assembly.

pub mod boolquery;
pub mod clf;
pub mod corpusio;
pub mod evalmetrics;
pub mod fuse;
pub mod genquery;
pub mod lexrank;

pub use boolquery::{parse_boolean, AtomTerm, FieldKind, FieldTag, ParseError, QueryNode};
pub use corpusio::{Document, Judgments, RankedEntry, RankedList, Topic};
