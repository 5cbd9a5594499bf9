//! PubMed-dialect Boolean queries.
//!
//! Systematic-review searches are written as nested `AND`/`OR`/`NOT`
//! expressions over terms that may be quoted phrases, carry a trailing `*`
//! truncation wildcard, and be followed by a bracketed field tag such as
//! `[mesh:noexp]` or `[All Fields]`. This module parses them into a typed
//! AST ([`QueryNode`]), renders the AST back to a canonical string, and
//! exposes the two views the rankers need: a flat bag of query terms and
//! the list of top-level clauses.
//!
//! The grammar is documented in `docs/boolean-grammar.md`.

mod parser;

pub use parser::{parse_boolean, ParseError, MAX_NESTING};

use crate::lexrank::tokenize;
use std::fmt;

/// A node of a parsed Boolean query.
///
/// `And`/`Or` always carry at least two children when produced by the
/// parser; `Not` is the binary `positive NOT negative` form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryNode {
    And(Vec<QueryNode>),
    Or(Vec<QueryNode>),
    Not {
        positive: Box<QueryNode>,
        negative: Box<QueryNode>,
    },
    Atom(AtomTerm),
}

/// A single search term: a bare (possibly multi-word) term or a quoted phrase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomTerm {
    /// Surface form with whitespace collapsed; never ends with `*`.
    pub text: String,
    pub is_phrase: bool,
    /// The term carried a trailing `*` wildcard.
    pub truncated: bool,
    pub field: FieldTag,
}

/// The bracketed field tag following an atom, e.g. `[tiab]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTag {
    /// Tag contents between the brackets, whitespace-normalised. Empty when
    /// the atom had no tag.
    pub raw: String,
    pub kind: FieldKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldKind {
    Mesh { no_explosion: bool },
    AllFields,
    TitleAbstract,
    Other(String),
}

impl FieldTag {
    /// Tag of an atom written without brackets.
    pub fn untagged() -> Self {
        Self {
            raw: String::new(),
            kind: FieldKind::AllFields,
        }
    }

    pub fn mesh(no_explosion: bool) -> Self {
        let raw = if no_explosion { "mesh:noexp" } else { "mesh" };
        Self::from_raw(raw)
    }

    pub fn all_fields() -> Self {
        Self::from_raw("All Fields")
    }

    pub fn title_abstract() -> Self {
        Self::from_raw("tiab")
    }

    /// Classifies the text found between brackets. Unknown tags become
    /// [`FieldKind::Other`].
    pub fn from_raw(raw: &str) -> Self {
        let raw = raw.split_whitespace().collect::<Vec<_>>().join(" ");
        if raw.is_empty() {
            return Self::untagged();
        }
        let lower = raw.to_lowercase();
        let (base, qualifier) = match lower.split_once(':') {
            Some((b, q)) => (b.trim(), Some(q.trim())),
            None => (lower.as_str(), None),
        };
        let kind = match base {
            "mesh" | "mh" | "mesh terms" | "majr" | "mesh major topic" => FieldKind::Mesh {
                no_explosion: qualifier == Some("noexp"),
            },
            "all fields" | "all" if qualifier.is_none() => FieldKind::AllFields,
            "tiab" | "title/abstract" if qualifier.is_none() => FieldKind::TitleAbstract,
            _ => FieldKind::Other(raw.clone()),
        };
        Self { raw, kind }
    }
}

impl AtomTerm {
    /// Untagged bare term.
    pub fn bare(text: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            is_phrase: false,
            truncated: false,
            field: FieldTag::untagged(),
        }
    }

    /// Untagged quoted phrase.
    pub fn phrase(text: impl Into<String>) -> Self {
        Self {
            is_phrase: true,
            ..Self::bare(text)
        }
    }

    pub fn truncated(mut self) -> Self {
        self.truncated = true;
        self
    }

    pub fn with_field(mut self, field: FieldTag) -> Self {
        self.field = field;
        self
    }
}

impl QueryNode {
    pub fn atom(term: AtomTerm) -> Self {
        QueryNode::Atom(term)
    }

    pub fn not(positive: QueryNode, negative: QueryNode) -> Self {
        QueryNode::Not {
            positive: Box::new(positive),
            negative: Box::new(negative),
        }
    }

    /// All atoms in left-to-right source order, negated ones included.
    pub fn atoms(&self) -> Vec<&AtomTerm> {
        let mut out = Vec::new();
        self.collect_atoms(true, &mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, include_negated: bool, out: &mut Vec<&'a AtomTerm>) {
        match self {
            QueryNode::And(children) | QueryNode::Or(children) => {
                for child in children {
                    child.collect_atoms(include_negated, out);
                }
            }
            QueryNode::Not { positive, negative } => {
                positive.collect_atoms(include_negated, out);
                if include_negated {
                    negative.collect_atoms(include_negated, out);
                }
            }
            QueryNode::Atom(term) => out.push(term),
        }
    }
}

/// Flattens the query to its bag of lowercase terms.
///
/// Field tags are dropped, wildcard stars stripped and phrases split into
/// their tokens (the tokenizer is [`crate::lexrank::tokenize`]). Atoms on
/// the negative side of a `NOT` are skipped unless `include_negated` is set.
pub fn extract_terms(q: &QueryNode, include_negated: bool) -> Vec<String> {
    let mut atoms = Vec::new();
    q.collect_atoms(include_negated, &mut atoms);
    atoms.into_iter().flat_map(|a| tokenize(&a.text)).collect()
}

/// Children of a root `AND`/`OR`, otherwise the query itself.
pub fn top_level_clauses(q: &QueryNode) -> Vec<QueryNode> {
    match q {
        QueryNode::And(children) | QueryNode::Or(children) => children.clone(),
        other => vec![other.clone()],
    }
}

/// Canonical string form; `parse_boolean(&render(q))` reproduces `q`.
pub fn render(q: &QueryNode) -> String {
    q.to_string()
}

impl fmt::Display for AtomTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let star = if self.truncated { "*" } else { "" };
        if self.is_phrase {
            write!(f, "\"{}{}\"", self.text, star)?;
        } else {
            write!(f, "{}{}", self.text, star)?;
        }
        if !self.field.raw.is_empty() {
            write!(f, "[{}]", self.field.raw)?;
        }
        Ok(())
    }
}

impl fmt::Display for QueryNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryNode::And(children) | QueryNode::Or(children) => {
                let op = if matches!(self, QueryNode::And(_)) {
                    " AND "
                } else {
                    " OR "
                };
                f.write_str("(")?;
                for (i, child) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(op)?;
                    }
                    write!(f, "{child}")?;
                }
                f.write_str(")")
            }
            QueryNode::Not { positive, negative } => write!(f, "({positive} NOT {negative})"),
            QueryNode::Atom(term) => write!(f, "{term}"),
        }
    }
}
