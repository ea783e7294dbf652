"""Fusion of the lexical and relevance legs into one ranked list.

Candidates come from the union of both legs' top pool_size (pool_mode
"union", the default) or from the relevance leg alone ("bert-only"). Each
candidate carries both scores, zero when a leg did not return it. Candidates
whose lexical similarity exceeds ``alpha`` form the HIGH_LEXICAL group and
are ranked first, by similarity alone: a strong question match is trusted
outright. Everything else is ranked by

    fused_score = similarity * t + relevance

Ties break by ascending faq id in both groups, and fused_score is computed
for every candidate regardless of group.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .analyzer import Analyzer
from .corpus import FaqCorpus
from .errors import ConfigError, TransportError, ValidationError
from .lexical import LexicalIndex, NormalizationParams, search_lexical
from .ranking import ScoredDoc
from .relevance import RelevanceScorer, search_relevance

POOL_MODES = ("union", "bert-only")


class Group(str, Enum):
    HIGH_LEXICAL = "HIGH_LEXICAL"
    FUSED = "FUSED"


@dataclass(frozen=True)
class FusionParams:
    alpha: float = 0.3
    t: float = 10.0
    pool_size: int = 10
    pool_mode: str = "union"

    def __post_init__(self) -> None:
        if self.pool_size < 1:
            raise ConfigError(f"pool_size must be >= 1, got {self.pool_size}")
        if self.pool_mode not in POOL_MODES:
            raise ConfigError(
                f"pool_mode must be one of {POOL_MODES}, got {self.pool_mode!r}"
            )


@dataclass(frozen=True)
class FusedCandidate:
    faq_id: str
    similarity: float
    relevance: float
    fused_score: float
    group: Group


def fused_score(similarity: float, relevance: float, t: float) -> float:
    return similarity * t + relevance


def _score_map(results: Sequence[ScoredDoc], leg: str) -> dict[str, float]:
    scores: dict[str, float] = {}
    for doc in results:
        if doc.faq_id in scores:
            raise ValidationError(f"duplicate id {doc.faq_id!r} in {leg} results")
        scores[doc.faq_id] = doc.score
    return scores


def fuse(
    lexical_results: Sequence[ScoredDoc],
    relevance_results: Sequence[ScoredDoc],
    params: FusionParams | None = None,
) -> list[FusedCandidate]:
    """Merge two ranked legs into the grouped, fused ordering.

    Inputs are ranked lists (score descending); the pool takes each leg's
    first pool_size entries, while score lookups consult the full lists.
    """
    params = params or FusionParams()
    lex_scores = _score_map(lexical_results, "lexical")
    rel_scores = _score_map(relevance_results, "relevance")

    pool_ids = {doc.faq_id for doc in relevance_results[: params.pool_size]}
    if params.pool_mode == "union":
        pool_ids.update(doc.faq_id for doc in lexical_results[: params.pool_size])

    candidates = []
    for faq_id in pool_ids:
        sim = lex_scores.get(faq_id, 0.0)
        rel = rel_scores.get(faq_id, 0.0)
        candidates.append(
            FusedCandidate(
                faq_id=faq_id,
                similarity=sim,
                relevance=rel,
                fused_score=fused_score(sim, rel, params.t),
                group=Group.HIGH_LEXICAL if sim > params.alpha else Group.FUSED,
            )
        )
    high = sorted(
        (c for c in candidates if c.group is Group.HIGH_LEXICAL),
        key=lambda c: (-c.similarity, c.faq_id),
    )
    rest = sorted(
        (c for c in candidates if c.group is Group.FUSED),
        key=lambda c: (-c.fused_score, c.faq_id),
    )
    return high + rest


@dataclass(frozen=True)
class FusedSearchResult:
    """Ranked candidates plus whether the relevance leg was unavailable."""

    candidates: tuple[FusedCandidate, ...]
    degraded: bool = False


def _lexical_only(lex: Sequence[ScoredDoc], params: FusionParams) -> FusedSearchResult:
    # Degraded mode keeps the lexical leg's own order regardless of pool_mode.
    candidates = tuple(
        FusedCandidate(
            faq_id=doc.faq_id,
            similarity=doc.score,
            relevance=0.0,
            fused_score=fused_score(doc.score, 0.0, params.t),
            group=Group.HIGH_LEXICAL if doc.score > params.alpha else Group.FUSED,
        )
        for doc in lex
    )
    return FusedSearchResult(candidates=candidates, degraded=True)


def search_fused(
    index: LexicalIndex,
    analyzer: Analyzer,
    scorer: RelevanceScorer,
    query: str,
    corpus: FaqCorpus,
    params: FusionParams | None = None,
    norm: NormalizationParams | None = None,
    concurrent: bool = True,
    degraded_ok: bool = True,
) -> FusedSearchResult:
    """Run both legs (with k = pool_size each) and fuse.

    The legs run on a two-worker pool when ``concurrent`` is set; the result
    is identical to sequential execution. A relevance-leg transport failure
    degrades to the lexical leg alone (flagged) when ``degraded_ok``,
    otherwise it propagates.
    """
    params = params or FusionParams()
    k = params.pool_size

    def lexical_leg() -> list[ScoredDoc]:
        return search_lexical(index, analyzer, query, k, norm)

    def relevance_leg() -> list[ScoredDoc]:
        return search_relevance(scorer, query, corpus, k)

    if concurrent:
        with ThreadPoolExecutor(max_workers=2) as pool:
            lex_future = pool.submit(lexical_leg)
            rel_future = pool.submit(relevance_leg)
            lex = lex_future.result()
            try:
                rel = rel_future.result()
            except TransportError:
                if not degraded_ok:
                    raise
                return _lexical_only(lex, params)
    else:
        lex = lexical_leg()
        try:
            rel = relevance_leg()
        except TransportError:
            if not degraded_ok:
                raise
            return _lexical_only(lex, params)
    return FusedSearchResult(candidates=tuple(fuse(lex, rel, params)), degraded=False)
