//! Clause-wise fusion baseline.
//!
//! Each child of the query root is scored separately against the topic's
//! candidates and the per-clause rankings are CombSUM-fused. Two clause
//! scorers are available: BM25 over the clause's terms, or a binary match
//! (1 if any clause term occurs in the document), under which a document's
//! fused score is simply the number of clauses it matches.

use crate::boolquery::{extract_terms, top_level_clauses, QueryNode};
use crate::corpusio::RankedList;
use crate::fuse::{combsum, FuseError, FusionPolicy};
use crate::lexrank::{score_bm25, Index, LexError, ScorerParams};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClauseScoring {
    #[default]
    Bm25,
    Binary,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClfError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Fuse(#[from] FuseError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClauseRanking {
    pub clause_index: usize,
    pub ranking: RankedList,
}

fn binary_clause(index: &Index, terms: &[String]) -> RankedList {
    let mut scores = vec![0.0; index.doc_count()];
    for token in terms {
        for p in index.postings(token).into_iter().flatten() {
            scores[p.doc] = 1.0;
        }
    }
    RankedList::from_scores(
        index.topic_id(),
        "binary",
        index.doc_ids().iter().cloned().zip(scores),
    )
}

/// One full ranking of the candidates per top-level clause.
pub fn clause_rankings(
    index: &Index,
    query: &QueryNode,
    params: &ScorerParams,
    scoring: ClauseScoring,
) -> Result<Vec<ClauseRanking>, ClfError> {
    top_level_clauses(query)
        .iter()
        .enumerate()
        .map(|(clause_index, clause)| {
            let terms = extract_terms(clause, false);
            let ranking = match scoring {
                ClauseScoring::Bm25 => score_bm25(index, &terms, params)?,
                ClauseScoring::Binary => binary_clause(index, &terms),
            };
            Ok(ClauseRanking {
                clause_index,
                ranking,
            })
        })
        .collect()
}

/// Fused clause ranking, tagged `clf`.
pub fn rank_clf(
    index: &Index,
    query: &QueryNode,
    params: &ScorerParams,
    scoring: ClauseScoring,
) -> Result<RankedList, ClfError> {
    let lists: Vec<RankedList> = clause_rankings(index, query, params, scoring)?
        .into_iter()
        .map(|c| c.ranking)
        .collect();
    Ok(combsum(&lists, FusionPolicy::default())?.with_tag("clf"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolquery::parse_boolean;
    use crate::corpusio::Document;
    use proptest::prelude::*;

    fn index(texts: &[(&str, &str)]) -> Index {
        let docs: Vec<Document> = texts.iter().map(|(id, t)| Document::new(*id, *t, "")).collect();
        Index::build("t", &docs).unwrap()
    }

    fn scores(list: &RankedList) -> std::collections::HashMap<String, f64> {
        list.entries().iter().map(|e| (e.doc_id.clone(), e.score)).collect()
    }

    #[test]
    fn two_clause_example() {
        let idx = index(&[("d1", "a b"), ("d2", "a"), ("d3", "c")]);
        let q = parse_boolean("a OR b").unwrap();
        let list = rank_clf(&idx, &q, &ScorerParams::default(), ClauseScoring::Bm25).unwrap();
        // N=3, avg=4/3.
        // clause a: df=2, idf=ln(1.6); d1 len 2, d2 len 1
        // clause b: df=1, idf=ln(2.5/1.5+1)=ln(8/3); d1 only
        let avg = 4.0 / 3.0;
        let term = |idf: f64, len: f64| idf * 2.5 / (1.0 + 1.5 * (0.25 + 0.75 * len / avg));
        let d1 = term(1.6f64.ln(), 2.0) + term((8.0f64 / 3.0).ln(), 2.0);
        let d2 = term(1.6f64.ln(), 1.0);
        let s = scores(&list);
        assert!((s["d1"] - d1).abs() < 1e-12);
        assert!((s["d2"] - d2).abs() < 1e-12);
        assert_eq!(s["d3"], 0.0);
        assert_eq!(list.doc_ids().collect::<Vec<_>>(), vec!["d1", "d2", "d3"]);
        assert_eq!(list.tag, "clf");
    }

    #[test]
    fn single_clause_equals_bm25() {
        let idx = index(&[("d1", "a b"), ("d2", "b c"), ("d3", "c d a a")]);
        let q = parse_boolean("a b*[tiab]").unwrap();
        let clf = rank_clf(&idx, &q, &ScorerParams::default(), ClauseScoring::Bm25).unwrap();
        let bm25 = score_bm25(&idx, &extract_terms(&q, false), &ScorerParams::default()).unwrap();
        assert_eq!(clf.entries(), bm25.entries());
    }

    #[test]
    fn duplicate_clause_doubles_scores() {
        let idx = index(&[("d1", "a b"), ("d2", "b c"), ("d3", "c d")]);
        let p = ScorerParams::default();
        let once = rank_clf(&idx, &parse_boolean("(b OR c) AND d").unwrap(), &p, ClauseScoring::Bm25).unwrap();
        let twice = rank_clf(&idx, &parse_boolean("(b OR c) AND (b OR c) AND d AND d").unwrap(), &p, ClauseScoring::Bm25).unwrap();
        assert_eq!(once.doc_ids().collect::<Vec<_>>(), twice.doc_ids().collect::<Vec<_>>());
        let (a, b) = (scores(&once), scores(&twice));
        for (doc, s) in a {
            assert!((b[&doc] - 2.0 * s).abs() < 1e-12);
        }
    }

    #[test]
    fn negated_terms_do_not_score() {
        let idx = index(&[("d1", "a"), ("d2", "z")]);
        let q = parse_boolean("(a NOT z) OR q").unwrap();
        let list = rank_clf(&idx, &q, &ScorerParams::default(), ClauseScoring::Binary).unwrap();
        assert_eq!(scores(&list)["d2"], 0.0);
        assert_eq!(scores(&list)["d1"], 1.0);
    }

    proptest! {
        /// Binary clause scoring counts matching clauses.
        #[test]
        fn binary_mode_counts_matching_clauses(
            docs in prop::collection::vec(prop::collection::vec(0u8..6, 0..6), 1..6),
            clauses in prop::collection::vec(prop::collection::vec(0u8..6, 1..3), 2..5),
        ) {
            let word = |t: &u8| format!("w{t}");
            let corpus: Vec<Document> = docs
                .iter()
                .enumerate()
                .map(|(i, ws)| Document::new(format!("d{i}"), ws.iter().map(word).collect::<Vec<_>>().join(" "), ""))
                .collect();
            let idx = Index::build("t", &corpus).unwrap();
            let text = clauses
                .iter()
                .map(|c| format!("({})", c.iter().map(word).collect::<Vec<_>>().join(" OR ")))
                .collect::<Vec<_>>()
                .join(" AND ");
            let q = parse_boolean(&text).unwrap();
            let list = rank_clf(&idx, &q, &ScorerParams::default(), ClauseScoring::Binary).unwrap();
            let got = scores(&list);
            for (i, ws) in docs.iter().enumerate() {
                let expected = clauses.iter().filter(|c| c.iter().any(|t| ws.contains(t))).count();
                prop_assert_eq!(got[&format!("d{i}")], expected as f64);
            }
        }
    }
}
