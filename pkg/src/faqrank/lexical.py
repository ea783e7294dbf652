"""Lexical leg: Okapi BM25 over FAQ questions plus query-length normalization.

The raw score for a document is

    sum over query tokens of  idf(term) * tf * (k + 1) / (tf + k * (1 - b + b * dl / avgdl))

with idf(term) = ln(1 + (N - df + 0.5) / (df + 0.5)). A token appearing twice
in the query contributes twice. Raw scores grow with query length, so the
similarity used everywhere downstream divides by a per-query constant:

    divisor = content_word_count * k1 + dependency_relation_count * k2

which preserves ranking within a query but makes scores comparable across
queries (and against the fusion threshold). A query with no content words has
similarity 0 for every document by definition.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from math import log
from pathlib import Path

from .analyzer import Analyzer, run_analyzer
from .corpus import FaqCorpus
from .errors import ConfigError, UnknownDocumentError, ValidationError
from .ranking import ScoredDoc

SNAPSHOT_FORMAT_VERSION = 1


@dataclass(frozen=True)
class BM25Params:
    k: float = 1.2
    b: float = 0.75

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ConfigError(f"bm25 k must be >= 0, got {self.k}")
        if not 0.0 <= self.b <= 1.0:
            raise ConfigError(f"bm25 b must be in [0, 1], got {self.b}")


@dataclass(frozen=True)
class NormalizationParams:
    """Per-query divisor coefficients: content words weigh k1, dependencies k2."""

    k1: float = 4.0
    k2: float = 2.0

    def __post_init__(self) -> None:
        if self.k1 <= 0:
            raise ConfigError(f"normalization k1 must be > 0, got {self.k1}")
        if self.k2 < 0:
            raise ConfigError(f"normalization k2 must be >= 0, got {self.k2}")

    def divisor(self, content_word_count: int, dependency_relation_count: int) -> float:
        return content_word_count * self.k1 + dependency_relation_count * self.k2


@dataclass(frozen=True)
class LexicalIndex:
    """Inverted index over FAQ questions.

    postings maps term -> ((doc_id, tf), ...) in corpus order; doc_lengths is
    the token count per document (stopwords included).
    """

    postings: dict[str, tuple[tuple[str, int], ...]]
    doc_lengths: dict[str, int]
    doc_count: int
    avg_doc_length: float
    params: BM25Params = field(default_factory=BM25Params)
    analyzer_fingerprint: str = ""

    def __post_init__(self) -> None:
        if self.doc_count != len(self.doc_lengths):
            raise ValidationError("doc_count does not match doc_lengths")
        if self.doc_count == 0:
            raise ValidationError("index must cover at least one document")
        mean = sum(self.doc_lengths.values()) / self.doc_count
        if abs(mean - self.avg_doc_length) > 1e-9:
            raise ValidationError("avg_doc_length does not match doc_lengths")
        for term, posting in self.postings.items():
            for doc_id, tf in posting:
                if doc_id not in self.doc_lengths:
                    raise ValidationError(f"posting for {term!r} names unknown doc {doc_id!r}")
                if tf < 1:
                    raise ValidationError(f"posting for {term!r} has tf < 1")

    def idf(self, term: str) -> float:
        df = len(self.postings.get(term, ()))
        return log(1.0 + (self.doc_count - df + 0.5) / (df + 0.5))


def build_index(
    corpus: FaqCorpus,
    analyzer: Analyzer,
    params: BM25Params | None = None,
) -> LexicalIndex:
    """Index the question text of every corpus entry."""
    params = params or BM25Params()
    postings: dict[str, dict[str, int]] = {}
    doc_lengths: dict[str, int] = {}
    for entry in corpus:
        tokens = run_analyzer(analyzer, entry.question).tokens
        doc_lengths[entry.id] = len(tokens)
        for term, tf in Counter(tokens).items():
            postings.setdefault(term, {})[entry.id] = tf
    fingerprint = getattr(analyzer, "fingerprint", "")
    return LexicalIndex(
        postings={t: tuple(docs.items()) for t, docs in postings.items()},
        doc_lengths=doc_lengths,
        doc_count=len(doc_lengths),
        avg_doc_length=sum(doc_lengths.values()) / len(doc_lengths),
        params=params,
        analyzer_fingerprint=fingerprint,
    )


def _tf_part(tf: int, dl: int, avgdl: float, params: BM25Params) -> float:
    ratio = dl / avgdl if avgdl > 0 else 0.0
    return tf * (params.k + 1.0) / (tf + params.k * (1.0 - params.b + params.b * ratio))


def raw_score(index: LexicalIndex, query_tokens: list[str] | tuple[str, ...], doc_id: str) -> float:
    """Unnormalized BM25 score of one document for an analyzed query."""
    if doc_id not in index.doc_lengths:
        raise UnknownDocumentError(f"unknown doc id {doc_id!r}")
    dl = index.doc_lengths[doc_id]
    score = 0.0
    for term, qtf in Counter(query_tokens).items():
        posting = dict(index.postings.get(term, ()))
        tf = posting.get(doc_id, 0)
        if tf == 0:
            continue
        score += qtf * index.idf(term) * _tf_part(tf, dl, index.avg_doc_length, index.params)
    return score


def similarity(
    index: LexicalIndex,
    analyzer: Analyzer,
    query: str,
    doc_id: str,
    norm: NormalizationParams | None = None,
) -> float:
    """Length-normalized similarity in the scale fusion expects."""
    norm = norm or NormalizationParams()
    analyzed = run_analyzer(analyzer, query)
    divisor = norm.divisor(analyzed.content_word_count, analyzed.dependency_relation_count)
    if divisor <= 0:
        if doc_id not in index.doc_lengths:
            raise UnknownDocumentError(f"unknown doc id {doc_id!r}")
        return 0.0
    return raw_score(index, analyzed.tokens, doc_id) / divisor


def search_lexical(
    index: LexicalIndex,
    analyzer: Analyzer,
    query: str,
    k: int,
    norm: NormalizationParams | None = None,
) -> list[ScoredDoc]:
    """Top-k documents by normalized similarity; zero scorers are dropped.

    Ties break by ascending doc id. The list may be shorter than k: only
    documents sharing at least one token with the query can score above 0.
    """
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    norm = norm or NormalizationParams()
    analyzed = run_analyzer(analyzer, query)
    divisor = norm.divisor(analyzed.content_word_count, analyzed.dependency_relation_count)
    if divisor <= 0:
        return []
    raw: dict[str, float] = {}
    for term, qtf in Counter(analyzed.tokens).items():
        posting = index.postings.get(term)
        if not posting:
            continue
        idf = index.idf(term)
        for doc_id, tf in posting:
            part = _tf_part(tf, index.doc_lengths[doc_id], index.avg_doc_length, index.params)
            raw[doc_id] = raw.get(doc_id, 0.0) + qtf * idf * part
    scored = [
        ScoredDoc(faq_id=doc_id, score=score / divisor)
        for doc_id, score in raw.items()
        if score != 0.0
    ]
    scored.sort(key=lambda d: (-d.score, d.faq_id))
    return scored[:k]


def save_index(index: LexicalIndex, path: str | Path) -> None:
    """Persist as a canonical JSON snapshot (sorted keys, stable bytes)."""
    snapshot = {
        "format_version": SNAPSHOT_FORMAT_VERSION,
        "bm25": {"k": index.params.k, "b": index.params.b},
        "doc_count": index.doc_count,
        "avg_doc_length": index.avg_doc_length,
        "doc_lengths": index.doc_lengths,
        "postings": {t: [[d, tf] for d, tf in p] for t, p in index.postings.items()},
        "analyzer_fingerprint": index.analyzer_fingerprint,
    }
    Path(path).write_text(
        json.dumps(snapshot, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n",
        encoding="utf-8",
    )


def load_index(path: str | Path) -> LexicalIndex:
    snapshot = json.loads(Path(path).read_text(encoding="utf-8"))
    version = snapshot.get("format_version")
    if version != SNAPSHOT_FORMAT_VERSION:
        raise ValidationError(
            f"unsupported index snapshot format_version {version!r}, "
            f"expected {SNAPSHOT_FORMAT_VERSION}"
        )
    return LexicalIndex(
        postings={
            t: tuple((d, int(tf)) for d, tf in p) for t, p in snapshot["postings"].items()
        },
        doc_lengths={d: int(n) for d, n in snapshot["doc_lengths"].items()},
        doc_count=int(snapshot["doc_count"]),
        avg_doc_length=float(snapshot["avg_doc_length"]),
        params=BM25Params(k=snapshot["bm25"]["k"], b=snapshot["bm25"]["b"]),
        analyzer_fingerprint=snapshot.get("analyzer_fingerprint", ""),
    )
