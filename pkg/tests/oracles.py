"""Independent brute-force references used to check the package's algebra.

Everything here is written straight from the definitions with naive loops,
deliberately sharing no code with src/. Tolerances live in the tests.
"""

from __future__ import annotations

import itertools
import math


# ---------------------------------------------------------------- metrics

def ref_average_precision(ranking, judgments, relevant_grades):
    total = 0
    for grade in judgments.values():
        if grade in relevant_grades:
            total += 1
    if total == 0:
        return 0.0
    hits = 0
    acc = 0.0
    for i in range(len(ranking)):
        grade = judgments.get(ranking[i])
        if grade in relevant_grades:
            hits += 1
            acc += hits / (i + 1)
    return acc / total


def ref_reciprocal_rank(ranking, judgments, relevant_grades):
    for i in range(len(ranking)):
        if judgments.get(ranking[i]) in relevant_grades:
            return 1.0 / (i + 1)
    return 0.0


def ref_precision_at_k(ranking, judgments, relevant_grades, k):
    hits = 0
    for i in range(min(k, len(ranking))):
        if judgments.get(ranking[i]) in relevant_grades:
            hits += 1
    return hits / k


def ref_success_at_k(ranking, judgments, relevant_grades, k):
    for i in range(min(k, len(ranking))):
        if judgments.get(ranking[i]) in relevant_grades:
            return 1.0
    return 0.0


def ref_ndcg(ranking, judgments, gains):
    dcg = 0.0
    for i in range(len(ranking)):
        grade = judgments.get(ranking[i])
        gain = gains.get(grade, 0) if grade is not None else 0
        dcg += gain / math.log2(i + 2)
    ideal = sorted((gains.get(g, 0) for g in judgments.values()), reverse=True)
    idcg = 0.0
    for i, gain in enumerate(ideal):
        idcg += gain / math.log2(i + 2)
    if idcg == 0.0:
        return 0.0
    return dcg / idcg


# ------------------------------------------------------------------ bm25

def ref_bm25(docs, query_tokens, doc_id, k=1.2, b=0.75):
    """docs: {doc_id: [token, ...]}; query tokens counted per occurrence."""
    n_docs = len(docs)
    avgdl = sum(len(toks) for toks in docs.values()) / n_docs
    dl = len(docs[doc_id])
    score = 0.0
    for token in query_tokens:
        df = sum(1 for toks in docs.values() if token in toks)
        tf = docs[doc_id].count(token)
        if tf == 0:
            continue
        idf = math.log(1.0 + (n_docs - df + 0.5) / (df + 0.5))
        ratio = dl / avgdl if avgdl > 0 else 0.0
        score += idf * tf * (k + 1.0) / (tf + k * (1.0 - b + b * ratio))
    return score


def ref_search_lexical(docs, query_tokens, divisor, top_k, k=1.2, b=0.75):
    """Brute force: score every doc, normalize, drop zeros, sort, truncate."""
    if divisor <= 0:
        return []
    scored = []
    for doc_id in docs:
        raw = ref_bm25(docs, query_tokens, doc_id, k=k, b=b)
        if raw != 0.0:
            scored.append((doc_id, raw / divisor))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored[:top_k]


# ---------------------------------------------------------------- fusion

def ref_fuse(lex, rel, alpha, t, pool_size, mode="union"):
    """Partition-then-sort, built straight from the rule.

    lex/rel are ranked [(id, score), ...]; returns [(id, sim, rel, fused,
    group), ...].
    """
    lex_map = dict(lex)
    rel_map = dict(rel)
    pool = set(doc_id for doc_id, _ in rel[:pool_size])
    if mode == "union":
        pool |= set(doc_id for doc_id, _ in lex[:pool_size])
    rows = []
    for doc_id in pool:
        sim = lex_map.get(doc_id, 0.0)
        relevance = rel_map.get(doc_id, 0.0)
        fused = sim * t + relevance
        group = "HIGH_LEXICAL" if sim > alpha else "FUSED"
        rows.append((doc_id, sim, relevance, fused, group))
    high = [r for r in rows if r[4] == "HIGH_LEXICAL"]
    rest = [r for r in rows if r[4] == "FUSED"]
    high.sort(key=lambda r: (-r[1], r[0]))
    rest.sort(key=lambda r: (-r[3], r[0]))
    return high + rest


def fuse_order_is_unique(rows):
    """Check by enumeration that exactly one permutation satisfies the rule.

    rows: output of ref_fuse. Only sensible for small pools.
    """

    def ok(perm):
        for a, b in zip(perm, perm[1:]):
            if a[4] == "FUSED" and b[4] == "HIGH_LEXICAL":
                return False
            if a[4] == b[4] == "HIGH_LEXICAL":
                if (-a[1], a[0]) > (-b[1], b[0]):
                    return False
            if a[4] == b[4] == "FUSED":
                if (-a[3], a[0]) > (-b[3], b[0]):
                    return False
        return True

    valid = [perm for perm in itertools.permutations(rows) if ok(perm)]
    return len(valid) == 1 and list(valid[0]) == list(rows)


# --------------------------------------------------------------- overlap

def ref_overlap(query_content, answer_content):
    qset = set(query_content)
    if not qset:
        return 0.0
    ratio = len(qset & set(answer_content)) / len(qset)
    return min(1.0, max(0.0, ratio))
