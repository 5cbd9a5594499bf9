use super::*;
use crate::corpusio::Document;
use proptest::prelude::*;
use std::collections::HashMap;

fn corpus(texts: &[(&str, &str)]) -> Vec<Document> {
    texts
        .iter()
        .map(|(id, text)| Document::new(*id, *text, ""))
        .collect()
}

fn toks(words: &[&str]) -> Vec<String> {
    words.iter().map(|w| w.to_string()).collect()
}

fn scores_of(list: &RankedList) -> HashMap<String, f64> {
    list.entries()
        .iter()
        .map(|e| (e.doc_id.clone(), e.score))
        .collect()
}

fn order(list: &RankedList) -> Vec<&str> {
    list.doc_ids().collect()
}

#[test]
fn tokenize_examples() {
    assert_eq!(
        tokenize("Esophageal and Gastric Varices"),
        vec!["esophageal", "and", "gastric", "varices"]
    );
    assert!(tokenize("").is_empty());
    assert_eq!(tokenize("gastro-esophag*"), vec!["gastro", "esophag"]);
    assert_eq!(tokenize("  COVID-19; β-blocker "), vec!["covid", "19", "β", "blocker"]);
}

#[test]
fn index_small() {
    let idx = Index::build("t", &corpus(&[("d1", "a b"), ("d2", "b c")])).unwrap();
    assert_eq!(idx.doc_count(), 2);
    assert_eq!(idx.avg_doc_len(), 2.0);
    let b: Vec<usize> = idx.postings("b").unwrap().iter().map(|p| p.doc).collect();
    assert_eq!(b, vec![0, 1]);
    assert_eq!(idx.collection_count("b"), 2);
}

#[test]
fn index_single_empty_doc() {
    let idx = Index::build("t", &[Document::new("d1", "", "")]).unwrap();
    assert_eq!(idx.doc_count(), 1);
    assert_eq!(idx.total_tokens(), 0);
    assert_eq!(idx.avg_doc_len(), 0.0);
    // BM25 over it is all zeros rather than NaN
    let list = score_bm25(&idx, &toks(&["a"]), &ScorerParams::default()).unwrap();
    assert_eq!(list.entries()[0].score, 0.0);
}

#[test]
fn index_empty_corpus() {
    assert_eq!(Index::build("t", &[]).unwrap_err(), LexError::EmptyCorpus);
}

#[test]
fn index_uses_title_and_abstract() {
    let idx = Index::build("t", &[Document::new("d1", "Heart", "failure")]).unwrap();
    assert_eq!(idx.doc_len(0), 2);
    assert_eq!(idx.tf("failure", 0), 1);
}

fn toy3() -> Index {
    Index::build("t", &corpus(&[("d1", "a b"), ("d2", "b c"), ("d3", "c d")])).unwrap()
}

#[test]
fn bm25_toy_corpus() {
    let list = score_bm25(&toy3(), &toks(&["b"]), &ScorerParams::default()).unwrap();
    // N=3, df(b)=2: idf = ln((3-2+0.5)/(2+0.5) + 1) = ln(1.6).
    // tf=1, len=avg=2: 1*(1.5+1)/(1 + 1.5*(0.25+0.75)) = 1.
    let expected = 1.6f64.ln();
    let s = scores_of(&list);
    assert!((s["d1"] - expected).abs() < 1e-9);
    assert!((s["d2"] - expected).abs() < 1e-9);
    assert_eq!(s["d3"], 0.0);
    assert_eq!(order(&list), vec!["d1", "d2", "d3"]);
    assert_eq!(list.tag, "bm25");
    assert_eq!(list.topic_id, "t");
}

#[test]
fn bm25_length_normalisation() {
    // d2 repeats `b` in a longer document: tf=2, len=3, avg=7/3.
    let idx = Index::build("t", &corpus(&[("d1", "a b"), ("d2", "b b e"), ("d3", "c d")])).unwrap();
    let list = score_bm25(&idx, &toks(&["b"]), &ScorerParams::default()).unwrap();
    let idf = 1.6f64.ln();
    let avg = 7.0 / 3.0;
    let d1 = idf * 2.5 / (1.0 + 1.5 * (0.25 + 0.75 * 2.0 / avg));
    let d2 = idf * 2.0 * 2.5 / (2.0 + 1.5 * (0.25 + 0.75 * 3.0 / avg));
    let s = scores_of(&list);
    assert!((s["d1"] - d1).abs() < 1e-12);
    assert!((s["d2"] - d2).abs() < 1e-12);
    assert_eq!(order(&list), vec!["d2", "d1", "d3"]);
}

#[test]
fn bm25_empty_and_oov_queries() {
    let empty = score_bm25(&toy3(), &[], &ScorerParams::default()).unwrap();
    assert_eq!(order(&empty), vec!["d1", "d2", "d3"]);
    assert!(empty.entries().iter().all(|e| e.score == 0.0));
    let oov = score_bm25(&toy3(), &toks(&["zzz"]), &ScorerParams::default()).unwrap();
    assert_eq!(oov, empty);
}

#[test]
fn qlm_toy_corpus() {
    let idx = Index::build("t", &corpus(&[("d1", "a a"), ("d2", "a b")])).unwrap();
    let params = ScorerParams::default();
    let list = score_qlm_jm(&idx, &toks(&["a"]), &params).unwrap();
    let s = scores_of(&list);
    // cf(a)=3, |C|=4
    assert!((s["d1"] - 0.875f64.ln()).abs() < 1e-9);
    assert!((s["d2"] - 0.625f64.ln()).abs() < 1e-9);
    assert_eq!(order(&list), vec!["d1", "d2"]);

    let list = score_qlm_jm(&idx, &toks(&["b"]), &params).unwrap();
    let s = scores_of(&list);
    // cf(b)=1: d1 = ln(0.5*0 + 0.5*0.25), d2 = ln(0.5*0.5 + 0.5*0.25)
    assert!((s["d1"] - 0.125f64.ln()).abs() < 1e-9);
    assert!((s["d2"] - 0.375f64.ln()).abs() < 1e-9);
    assert_eq!(order(&list), vec!["d2", "d1"]);
}

#[test]
fn qlm_empty_query_and_oov() {
    let idx = Index::build("t", &corpus(&[("d2", "a a"), ("d1", "a b")])).unwrap();
    let list = score_qlm_jm(&idx, &[], &ScorerParams::default()).unwrap();
    assert_eq!(order(&list), vec!["d1", "d2"]);
    assert!(list.entries().iter().all(|e| e.score == 0.0));
    // OOV terms shift every document equally, so they are skipped
    let with_oov = score_qlm_jm(&idx, &toks(&["a", "zzz"]), &ScorerParams::default()).unwrap();
    let without = score_qlm_jm(&idx, &toks(&["a"]), &ScorerParams::default()).unwrap();
    assert_eq!(with_oov, without);
    assert!(with_oov.entries().iter().all(|e| e.score.is_finite()));
}

#[test]
fn qlm_empty_documents_use_background_only() {
    let idx = Index::build("t", &corpus(&[("d1", "a b"), ("d2", "")])).unwrap();
    let list = score_qlm_jm(&idx, &toks(&["a"]), &ScorerParams::default()).unwrap();
    let s = scores_of(&list);
    assert!((s["d2"] - (0.5f64 * 0.5).ln()).abs() < 1e-12);
}

#[test]
fn qlm_empty_collection() {
    let idx = Index::build("t", &[Document::new("d1", "", "")]).unwrap();
    assert_eq!(
        score_qlm_jm(&idx, &toks(&["a"]), &ScorerParams::default()).unwrap_err(),
        LexError::EmptyCollection
    );
    assert!(score_qlm_jm(&idx, &[], &ScorerParams::default()).is_ok());
}

#[test]
fn params_are_validated() {
    let bad = [
        ScorerParams { bm25_k1: 0.0, ..Default::default() },
        ScorerParams { bm25_b: 1.5, ..Default::default() },
        ScorerParams { qlm_lambda: 1.0, ..Default::default() },
        ScorerParams { qlm_lambda: 0.0, ..Default::default() },
    ];
    for p in bad {
        assert!(matches!(p.validate(), Err(LexError::InvalidParams(_))));
    }
    assert!(score_bm25(&toy3(), &[], &bad[0]).is_err());
}

fn micro_corpus() -> impl Strategy<Value = Vec<Vec<u8>>> {
    // documents over the alphabet {a, b, c}, 1..=6 tokens each
    prop::collection::vec(prop::collection::vec(0u8..3, 1..7), 1..7)
}

fn docs_from(raw: &[Vec<u8>]) -> Vec<Document> {
    raw.iter()
        .enumerate()
        .map(|(i, toks)| {
            let text: Vec<&str> = toks.iter().map(|t| ["a", "b", "c"][*t as usize]).collect();
            Document::new(format!("d{i:02}"), text.join(" "), "")
        })
        .collect()
}

proptest! {
    #[test]
    fn index_counts_match_naive_scan(raw in prop::collection::vec(prop::collection::vec(0u8..5, 0..8), 1..8)) {
        let docs: Vec<Document> = raw
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let words: Vec<String> = t.iter().map(|x| format!("w{x}")).collect();
                Document::new(format!("d{i}"), words.join(" "), "")
            })
            .collect();
        let idx = Index::build("t", &docs).unwrap();
        let total: usize = idx.doc_lengths().iter().sum();
        prop_assert_eq!(total as u64, idx.total_tokens());
        prop_assert_eq!(idx.avg_doc_len(), total as f64 / docs.len() as f64);
        for token in idx.vocabulary() {
            let naive: u64 = raw.iter().flatten().filter(|x| format!("w{x}") == token).count() as u64;
            let from_postings: u64 = idx.postings(token).unwrap().iter().map(|p| u64::from(p.tf)).sum();
            prop_assert_eq!(naive, idx.collection_count(token));
            prop_assert_eq!(from_postings, naive);
        }
    }

    #[test]
    fn scorers_rank_every_document(raw in micro_corpus(), q in prop::collection::vec(0u8..4, 0..4)) {
        let docs = docs_from(&raw);
        let idx = Index::build("t", &docs).unwrap();
        let query: Vec<String> = q.iter().map(|t| ["a", "b", "c", "zz"][*t as usize].to_string()).collect();
        let p = ScorerParams::default();
        prop_assert_eq!(score_bm25(&idx, &query, &p).unwrap().len(), docs.len());
        prop_assert_eq!(score_qlm_jm(&idx, &query, &p).unwrap().len(), docs.len());
    }

    #[test]
    fn insertion_order_does_not_change_scores(raw in micro_corpus(), q in prop::collection::vec(0u8..3, 1..4), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let docs = docs_from(&raw);
        let mut shuffled = docs.clone();
        shuffled.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
        let query: Vec<String> = q.iter().map(|t| ["a", "b", "c"][*t as usize].to_string()).collect();
        let p = ScorerParams::default();
        let a = Index::build("t", &docs).unwrap();
        let b = Index::build("t", &shuffled).unwrap();
        prop_assert_eq!(score_bm25(&a, &query, &p).unwrap(), score_bm25(&b, &query, &p).unwrap());
        prop_assert_eq!(score_qlm_jm(&a, &query, &p).unwrap(), score_qlm_jm(&b, &query, &p).unwrap());
    }

    /// Swapping one filler token of a document for the query term (length
    /// and df held fixed) strictly raises its BM25 score.
    #[test]
    fn bm25_increases_with_tf(tf in 1usize..6, extra in 0usize..6, others in prop::collection::vec((0usize..4, 1usize..8), 1..5), k1 in 0.1f64..3.0, b in 0.0f64..=1.0) {
        let len = tf + 1 + extra;
        let build = |tf: usize| {
            let mut words = vec!["q"; tf];
            words.extend(vec!["x"; len - tf]);
            let mut docs = vec![Document::new("target", words.join(" "), "")];
            for (i, (otf, filler)) in others.iter().enumerate() {
                let mut w = vec!["q"; *otf];
                w.extend(vec!["y"; *filler]);
                docs.push(Document::new(format!("o{i}"), w.join(" "), ""));
            }
            Index::build("t", &docs).unwrap()
        };
        let p = ScorerParams { bm25_k1: k1, bm25_b: b, ..Default::default() };
        let q = vec!["q".to_string()];
        let lo = scores_of(&score_bm25(&build(tf), &q, &p).unwrap())["target"];
        let hi = scores_of(&score_bm25(&build(tf + 1), &q, &p).unwrap())["target"];
        prop_assert!(hi > lo, "tf {} -> {}: {} vs {}", tf, tf + 1, lo, hi);
    }

    #[test]
    fn qlm_near_one_lambda_orders_by_tf_over_len(raw in micro_corpus(), term in 0u8..3) {
        let docs = docs_from(&raw);
        let token = ["a", "b", "c"][term as usize];
        prop_assume!(raw.iter().flatten().any(|t| *t == term));
        let idx = Index::build("t", &docs).unwrap();
        let p = ScorerParams { qlm_lambda: 1.0 - 1e-6, ..Default::default() };
        let list = score_qlm_jm(&idx, &[token.to_string()], &p).unwrap();

        // brute force: sort by tf/len descending using exact cross-multiplication
        let mut expected: Vec<(String, usize, usize)> = raw
            .iter()
            .enumerate()
            .map(|(i, t)| (format!("d{i:02}"), t.iter().filter(|x| **x == term).count(), t.len()))
            .collect();
        expected.sort_by(|a, b| (b.1 * a.2).cmp(&(a.1 * b.2)).then_with(|| a.0.cmp(&b.0)));
        let expected: Vec<&str> = expected.iter().map(|e| e.0.as_str()).collect();
        prop_assert_eq!(order(&list), expected);
    }
}
