"""Evaluation toolkit: graded-relevance IR metrics over run files.

Judgments are letter grades A (best) to D (irrelevant). Binary metrics (AP,
RR, P@k, SR@k) treat the grades in ``relevant_grades`` as relevant; nDCG maps
grades to gains. A document missing from a query's judgments is not relevant
and has gain 0. All per-query metrics assume duplicate-free rankings and are
averaged unweighted across the whole query set; queries absent from a run
contribute zeros rather than being skipped.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass, field
from math import log2
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import GRADES, QueryRecord, RunEntry
from .errors import ValidationError

GAIN_MODES = ("linear", "exponential")


@dataclass(frozen=True)
class EvalConfig:
    relevant_grades: frozenset[str] = frozenset({"A", "B", "C"})
    gains: Mapping[str, int] = field(
        default_factory=lambda: {"A": 3, "B": 2, "C": 1, "D": 0}
    )
    p_k: int = 5
    sr_ks: tuple[int, ...] = (1, 5)
    gain_mode: str = "linear"

    def __post_init__(self) -> None:
        unknown = self.relevant_grades - set(GRADES)
        if unknown:
            raise ValidationError(f"unknown grades in relevant_grades: {sorted(unknown)}")
        if self.gain_mode not in GAIN_MODES:
            raise ValidationError(f"gain_mode must be one of {GAIN_MODES}")
        if self.p_k < 1:
            raise ValidationError(f"p_k must be >= 1, got {self.p_k}")
        if not self.sr_ks or any(k < 1 for k in self.sr_ks):
            raise ValidationError("sr_ks must be non-empty positive cutoffs")
        object.__setattr__(self, "gains", dict(self.gains))

    def gain(self, grade: str | None) -> float:
        level = self.gains.get(grade, 0) if grade is not None else 0
        if self.gain_mode == "exponential":
            return float(2**level - 1)
        return float(level)

    def is_relevant(self, grade: str | None) -> bool:
        return grade in self.relevant_grades


def _check_ranking(ranking: Sequence[str]) -> None:
    if len(set(ranking)) != len(ranking):
        raise ValidationError("ranking contains duplicate ids")


def average_precision(
    ranking: Sequence[str], judgments: Mapping[str, str], config: EvalConfig
) -> float:
    """Mean of precision at each relevant hit, over ALL judged-relevant docs."""
    _check_ranking(ranking)
    total_relevant = sum(1 for g in judgments.values() if config.is_relevant(g))
    if total_relevant == 0:
        return 0.0
    hits = 0
    precision_sum = 0.0
    for rank, doc_id in enumerate(ranking, start=1):
        if config.is_relevant(judgments.get(doc_id)):
            hits += 1
            precision_sum += hits / rank
    return precision_sum / total_relevant


def reciprocal_rank(
    ranking: Sequence[str], judgments: Mapping[str, str], config: EvalConfig
) -> float:
    _check_ranking(ranking)
    for rank, doc_id in enumerate(ranking, start=1):
        if config.is_relevant(judgments.get(doc_id)):
            return 1.0 / rank
    return 0.0


def precision_at_k(
    ranking: Sequence[str],
    judgments: Mapping[str, str],
    config: EvalConfig,
    k: int | None = None,
) -> float:
    """Relevant docs in the top k over a fixed denominator of k."""
    _check_ranking(ranking)
    k = config.p_k if k is None else k
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    hits = sum(1 for doc_id in ranking[:k] if config.is_relevant(judgments.get(doc_id)))
    return hits / k


def success_at_k(
    ranking: Sequence[str], judgments: Mapping[str, str], config: EvalConfig, k: int
) -> float:
    _check_ranking(ranking)
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    return 1.0 if any(
        config.is_relevant(judgments.get(doc_id)) for doc_id in ranking[:k]
    ) else 0.0


def ndcg(
    ranking: Sequence[str], judgments: Mapping[str, str], config: EvalConfig
) -> float:
    """DCG over the ranking divided by the DCG of the ideal judged ordering.

    The ideal ordering places every judged document by descending gain, so a
    short ranking is penalized for what it failed to retrieve. IDCG of 0
    (nothing judged useful) defines nDCG as 0.
    """
    _check_ranking(ranking)
    dcg = sum(
        config.gain(judgments.get(doc_id)) / log2(rank + 1)
        for rank, doc_id in enumerate(ranking, start=1)
    )
    ideal_gains = sorted((config.gain(g) for g in judgments.values()), reverse=True)
    idcg = sum(gain / log2(rank + 1) for rank, gain in enumerate(ideal_gains, start=1))
    if idcg == 0.0:
        return 0.0
    return dcg / idcg


@dataclass(frozen=True)
class QueryMetrics:
    ap: float
    rr: float
    p_at_k: float
    sr: dict[int, float]
    ndcg: float


def compute_query_metrics(
    ranking: Sequence[str], judgments: Mapping[str, str], config: EvalConfig
) -> QueryMetrics:
    return QueryMetrics(
        ap=average_precision(ranking, judgments, config),
        rr=reciprocal_rank(ranking, judgments, config),
        p_at_k=precision_at_k(ranking, judgments, config),
        sr={k: success_at_k(ranking, judgments, config, k) for k in config.sr_ks},
        ndcg=ndcg(ranking, judgments, config),
    )


@dataclass(frozen=True)
class EvalReport:
    map: float
    mrr: float
    p_at_k: float
    sr: dict[int, float]
    ndcg: float
    p_k: int
    num_queries: int
    per_query: dict[str, QueryMetrics]

    def to_json_dict(self) -> dict:
        out: dict = {
            "map": self.map,
            "mrr": self.mrr,
            f"p@{self.p_k}": self.p_at_k,
        }
        for k in sorted(self.sr):
            out[f"sr@{k}"] = self.sr[k]
        out["ndcg"] = self.ndcg
        out["num_queries"] = self.num_queries
        out["per_query"] = {
            qid: {
                "ap": m.ap,
                "rr": m.rr,
                f"p@{self.p_k}": m.p_at_k,
                **{f"sr@{k}": m.sr[k] for k in sorted(m.sr)},
                "ndcg": m.ndcg,
            }
            for qid, m in sorted(self.per_query.items())
        }
        return out

    def to_text_table(self) -> str:
        rows = [("MAP", self.map), ("MRR", self.mrr), (f"P@{self.p_k}", self.p_at_k)]
        rows += [(f"SR@{k}", self.sr[k]) for k in sorted(self.sr)]
        rows.append(("nDCG", self.ndcg))
        name_width = max(len(name) for name, _ in rows)
        lines = [f"{name:<{name_width}}  {value:.4f}" for name, value in rows]
        lines.append(f"{'queries':<{name_width}}  {self.num_queries}")
        return "\n".join(lines) + "\n"


def _rankings_by_qid(run: Iterable[RunEntry]) -> dict[str, list[str]]:
    grouped: dict[str, list[tuple[int, str]]] = {}
    for entry in run:
        grouped.setdefault(entry.qid, []).append((entry.rank, entry.faq_id))
    return {
        qid: [doc_id for _, doc_id in sorted(pairs)] for qid, pairs in grouped.items()
    }


def evaluate_run(
    run: Iterable[RunEntry],
    queries: Sequence[QueryRecord],
    config: EvalConfig | None = None,
) -> EvalReport:
    """Score a run against a query set; unanswered queries count as zeros."""
    config = config or EvalConfig()
    if not queries:
        raise ValidationError("query set is empty")
    rankings = _rankings_by_qid(run)
    known_qids = {q.qid for q in queries}
    unknown = set(rankings) - known_qids
    if unknown:
        raise ValidationError(f"run contains qids not in the query set: {sorted(unknown)}")
    per_query: dict[str, QueryMetrics] = {}
    for query in queries:
        ranking = rankings.get(query.qid, [])
        per_query[query.qid] = compute_query_metrics(ranking, query.judgments, config)
    n = len(queries)
    return EvalReport(
        map=sum(m.ap for m in per_query.values()) / n,
        mrr=sum(m.rr for m in per_query.values()) / n,
        p_at_k=sum(m.p_at_k for m in per_query.values()) / n,
        sr={
            k: sum(m.sr[k] for m in per_query.values()) / n for k in config.sr_ks
        },
        ndcg=sum(m.ndcg for m in per_query.values()) / n,
        p_k=config.p_k,
        num_queries=n,
        per_query=per_query,
    )


@dataclass(frozen=True)
class FoldSplit:
    train: frozenset[str]
    dev: frozenset[str]
    test: frozenset[str]


def kfold_split(
    qids: Sequence[str],
    folds: int = 5,
    ratios: tuple[float, float, float] = (0.6, 0.2, 0.2),
    seed: int = 0,
) -> list[FoldSplit]:
    """Rotated k-fold: test = chunk i, dev = the next chunk, train = the rest.

    Test folds partition the query set, which pins the test fraction to
    1/folds; ``ratios`` is validated against that geometry (the default
    (0.6, 0.2, 0.2) matches folds=5 exactly).
    """
    if folds < 3:
        raise ValidationError(f"folds must be >= 3, got {folds}")
    if len(qids) < folds:
        raise ValidationError(f"need at least {folds} queries, got {len(qids)}")
    if len(set(qids)) != len(qids):
        raise ValidationError("qids contain duplicates")
    expected = ((folds - 2) / folds, 1 / folds, 1 / folds)
    if any(abs(r - e) > 1e-9 for r, e in zip(ratios, expected)):
        raise ValidationError(
            f"ratios {ratios} are incompatible with folds={folds}; "
            f"rotation geometry requires {expected}"
        )
    order = list(qids)
    random.Random(seed).shuffle(order)
    base, extra = divmod(len(order), folds)
    chunks: list[list[str]] = []
    start = 0
    for i in range(folds):
        size = base + (1 if i < extra else 0)
        chunks.append(order[start : start + size])
        start += size
    splits = []
    for i in range(folds):
        test = chunks[i]
        dev = chunks[(i + 1) % folds]
        train = [q for j, chunk in enumerate(chunks) if j not in (i, (i + 1) % folds) for q in chunk]
        splits.append(
            FoldSplit(train=frozenset(train), dev=frozenset(dev), test=frozenset(test))
        )
    return splits


@dataclass(frozen=True)
class BucketRow:
    """One score interval [low, high) and the top-1 outcomes that fell in it."""

    low: float
    high: float
    top1_correct: int
    top1_incorrect: int


def score_bucket_report(
    run: Iterable[RunEntry],
    queries: Sequence[QueryRecord],
    config: EvalConfig | None = None,
    edges: Sequence[float] = (0.0, 0.2, 0.4, 0.6, 0.8),
) -> list[BucketRow]:
    """Bucket queries by rank-1 score against rank-1 correctness.

    Rows cover (-inf, edges[0]), each [e_i, e_{i+1}), and [edges[-1], inf);
    a query is correct when its top-ranked id is judged relevant. Queries
    absent from the run are not bucketed. An empty run yields all-zero rows.
    """
    config = config or EvalConfig()
    edges = list(edges)
    if not edges or any(b <= a for a, b in zip(edges, edges[1:])):
        raise ValidationError("edges must be non-empty and strictly increasing")
    judgments = {q.qid: q.judgments for q in queries}
    bounds = [(float("-inf"), edges[0])]
    bounds += list(zip(edges, edges[1:]))
    bounds.append((edges[-1], float("inf")))
    correct = [0] * len(bounds)
    incorrect = [0] * len(bounds)
    for entry in run:
        if entry.rank != 1:
            continue
        if entry.qid not in judgments:
            raise ValidationError(f"run contains qid {entry.qid!r} not in the query set")
        idx = next(
            i for i, (low, high) in enumerate(bounds) if low <= entry.score < high
        )
        grade = judgments[entry.qid].get(entry.faq_id)
        if config.is_relevant(grade):
            correct[idx] += 1
        else:
            incorrect[idx] += 1
    return [
        BucketRow(low=low, high=high, top1_correct=c, top1_incorrect=i)
        for (low, high), c, i in zip(bounds, correct, incorrect)
    ]


def bucket_report_to_csv(rows: Sequence[BucketRow], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["low", "high", "top1_correct", "top1_incorrect"])
        for row in rows:
            writer.writerow([row.low, row.high, row.top1_correct, row.top1_incorrect])
