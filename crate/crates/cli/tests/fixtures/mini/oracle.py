"""Recomputes expected_eval.csv for the mini fixture from first principles.

Steps mirrored from the command sequence in the acceptance test:

    rank --scorer bm25 --source boolean-terms
    rank --scorer qlm  --source boolean-terms
    fuse bm25-boolean-terms.run qlm-boolean-terms.run --normalize minmax
    eval bm25-boolean-terms.run qlm-boolean-terms.run combsum.run

Run files carry six decimals, so every stage after ranking reads the
rounded scores, exactly like a consumer of the files would.

Usage: python3 oracle.py > expected_eval.csv
"""

import json
import math
import os
import re
from fractions import Fraction

HERE = os.path.dirname(os.path.abspath(__file__))
K1, B, LAMBDA = 1.5, 0.75, 0.5
PERCENTS = [1, 5, 10, 20]
WSS_TARGETS = [Fraction(95, 100), Fraction(1)]


def tokenize(text):
    return [t.lower() for t in re.split(r"[^0-9A-Za-z]+", text) if t]


def query_terms(boolean):
    """Bag of query tokens: field tags dropped, the trailing NOT operand
    dropped, operator keywords removed, everything else tokenized."""
    text = re.sub(r"\[[^\]]*\]", " ", boolean)
    text = text.split(" NOT ")[0]
    text = re.sub(r"\b(AND|OR)\b", " ", text)
    return tokenize(text)


def load():
    corpus = {}
    with open(os.path.join(HERE, "corpus.jsonl")) as f:
        for line in f:
            d = json.loads(line)
            corpus[d["doc_id"]] = tokenize(d["title"] + " " + d.get("abstract", ""))
    topics = []
    with open(os.path.join(HERE, "topics.jsonl")) as f:
        for line in f:
            topics.append(json.loads(line))
    candidates = {}
    with open(os.path.join(HERE, "candidates.txt")) as f:
        for line in f:
            t, d = line.split()
            candidates.setdefault(t, []).append(d)
    qrels = {}
    with open(os.path.join(HERE, "qrels.txt")) as f:
        for line in f:
            t, _, d, g = line.split()
            qrels.setdefault(t, {})[d] = int(g)
    return corpus, topics, candidates, qrels


def bm25(docs, query):
    n = len(docs)
    avg = sum(len(toks) for toks in docs.values()) / n
    scores = {d: 0.0 for d in docs}
    for q in query:
        df = sum(1 for toks in docs.values() if q in toks)
        if df == 0:
            continue
        idf = math.log((n - df + 0.5) / (df + 0.5) + 1.0)
        for d, toks in docs.items():
            tf = toks.count(q)
            if tf == 0:
                continue
            norm = K1 * (1.0 - B + B * len(toks) / avg)
            scores[d] += idf * tf * (K1 + 1.0) / (tf + norm)
    return scores


def qlm(docs, query):
    total = sum(len(toks) for toks in docs.values())
    scores = {d: 0.0 for d in docs}
    for q in query:
        cf = sum(toks.count(q) for toks in docs.values())
        if cf == 0:
            continue
        background = (1.0 - LAMBDA) * (cf / total)
        for d, toks in docs.items():
            fg = LAMBDA * (toks.count(q) / len(toks)) if toks else 0.0
            scores[d] += math.log(fg + background)
    return scores


def as_file(scores):
    """Ranked (doc, score) pairs as they come back from a run file."""
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return [(d, float("%.6f" % s)) for d, s in ranked]


def minmax(ranked):
    values = [s for _, s in ranked]
    lo, hi = min(values), max(values)
    span = hi - lo
    return {d: ((s - lo) / span if span > 0 else 0.5) for d, s in ranked}


def combsum(lists):
    parts = {}
    for lst in lists:
        for d, s in minmax(lst).items():
            parts.setdefault(d, []).append(s)
    return {d: sum(sorted(p), 0.0) for d, p in parts.items()}


def metrics(ranked, judged):
    flags = [judged.get(d, 0) > 0 for d, _ in ranked]
    n = len(flags)
    r = sum(1 for g in judged.values() if g > 0)
    ap_sum, hits = 0.0, 0
    for k, rel in enumerate(flags, start=1):
        if rel:
            hits += 1
            ap_sum += hits / k
    ap = ap_sum / r
    rel_ranks = [k for k, rel in enumerate(flags, start=1) if rel]
    last = rel_ranks[-1] if len(rel_ranks) == r else n
    recalls = []
    for p in PERCENTS:
        cutoff = -(-p * n // 100)
        recalls.append(sum(flags[:cutoff]) / r)
    wss = []
    for target in WSS_TARGETS:
        need = max(1, math.ceil(target * r))
        rank = rel_ranks[need - 1] if len(rel_ranks) >= need else n
        wss.append((n - rank) / n - (1.0 - float(target)))
    return ap, last, recalls, wss


def rows(tag, per_topic):
    out = []
    for topic in sorted(per_topic):
        ap, last, recalls, wss = per_topic[topic]
        vals = ",".join("%.4f" % v for v in recalls + wss)
        out.append("%s,%s,%.4f,%d,%s" % (tag, topic, ap, last, vals))
    t = len(per_topic)
    mean = lambda f: sum(f(per_topic[k]) for k in sorted(per_topic)) / t
    m_ap = mean(lambda m: m[0])
    m_last = mean(lambda m: float(m[1]))
    m_rec = [mean(lambda m, i=i: m[2][i]) for i in range(len(PERCENTS))]
    m_wss = [mean(lambda m, i=i: m[3][i]) for i in range(len(WSS_TARGETS))]
    vals = ",".join("%.4f" % v for v in m_rec + m_wss)
    out.append("%s,MEAN,%.4f,%.4f,%s" % (tag, m_ap, m_last, vals))
    return out


def main():
    corpus, topics, candidates, qrels = load()
    runs = {"bm25-boolean-terms": {}, "qlm-boolean-terms": {}, "combsum": {}}
    for t in topics:
        tid = t["topic_id"]
        docs = {d: corpus[d] for d in candidates[tid]}
        query = query_terms(t["boolean"])
        b = as_file(bm25(docs, query))
        q = as_file(qlm(docs, query))
        runs["bm25-boolean-terms"][tid] = b
        runs["qlm-boolean-terms"][tid] = q
        runs["combsum"][tid] = as_file(combsum([b, q]))
    header = "run,topic,ap,last_rel," + ",".join("recall@%d" % p for p in PERCENTS) + ",wss95,wss100"
    print(header)
    for tag in ["bm25-boolean-terms", "qlm-boolean-terms", "combsum"]:
        per_topic = {tid: metrics(ranked, qrels[tid]) for tid, ranked in runs[tag].items()}
        for line in rows(tag, per_topic):
            print(line)


if __name__ == "__main__":
    main()
