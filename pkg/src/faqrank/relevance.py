"""Relevance leg: training-pair generation and query-answer scorers.

Training data pairs every FAQ question with its own answer (label 1) and with
``neg_ratio`` answers sampled from other entries (label 0). Scoring at query
time goes through the RelevanceScorer protocol: the built-in scorer is a
content-word overlap ratio (useful as a dependency-free stand-in and for
tests), the remote scorer speaks the /v1/score wire protocol to a model
server.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Protocol, Sequence

import httpx

from .analyzer import Analyzer, run_analyzer
from .corpus import FaqCorpus, FaqEntry
from .errors import ParseError, ProtocolError, TransportError, ValidationError
from .ranking import ScoredDoc


@dataclass(frozen=True)
class RelevanceExample:
    """One training pair: left text, right text, binary label."""

    left: str
    right: str
    label: int

    def __post_init__(self) -> None:
        if self.label not in (0, 1):
            raise ValidationError(f"label must be 0 or 1, got {self.label}")
        if not self.left or not self.right:
            raise ValidationError("left and right must be non-empty")


class RelevanceScorer(Protocol):
    """Scores (query, answer) pairs; every score must land in [0, 1]."""

    def score_batch(self, pairs: Sequence[tuple[str, str]]) -> list[float]: ...


def generate_training_pairs(
    corpora: Sequence[FaqCorpus],
    neg_ratio: int = 24,
    seed: int = 0,
    same_source: bool = False,
) -> list[RelevanceExample]:
    """Emit (Q, A, 1) plus neg_ratio sampled (Q, A', 0) per pooled entry.

    Negatives are drawn uniformly without replacement from the answers of
    other entries (same-source entries only when ``same_source`` is set).
    Output order is deterministic for a fixed seed: entries in pool order,
    each positive followed by its negatives in draw order.
    """
    if neg_ratio < 0:
        raise ValidationError(f"neg_ratio must be >= 0, got {neg_ratio}")
    pool: list[FaqEntry] = [entry for corpus in corpora for entry in corpus]
    seen_ids: set[str] = set()
    for entry in pool:
        if entry.id in seen_ids:
            raise ValidationError(f"entry id {entry.id!r} appears in more than one corpus")
        seen_ids.add(entry.id)
    if len(pool) < 2:
        raise ValidationError("need at least 2 pooled entries to sample negatives")
    rng = random.Random(seed)
    examples: list[RelevanceExample] = []
    for entry in pool:
        candidates = [
            other
            for other in pool
            if other.id != entry.id and (not same_source or other.source == entry.source)
        ]
        if neg_ratio > len(candidates):
            raise ValidationError(
                f"neg_ratio {neg_ratio} exceeds available negatives "
                f"({len(candidates)}) for entry {entry.id!r}"
            )
        examples.append(RelevanceExample(left=entry.question, right=entry.answer, label=1))
        for other in rng.sample(candidates, neg_ratio):
            examples.append(RelevanceExample(left=entry.question, right=other.answer, label=0))
    return examples


def split_paraphrase_triples(
    triples: Iterable[tuple[str, str, str]],
) -> list[RelevanceExample]:
    """Turn (query, question, answer) triples into positives, deduplicated.

    Each triple yields (query, answer, 1) and (question, answer, 1); exact
    duplicate text pairs are emitted once, keeping first-occurrence order.
    """
    seen: set[tuple[str, str]] = set()
    out: list[RelevanceExample] = []
    for query, question, answer in triples:
        for left in (query, question):
            key = (left, answer)
            if key in seen:
                continue
            seen.add(key)
            out.append(RelevanceExample(left=left, right=answer, label=1))
    return out


def write_examples(examples: Iterable[RelevanceExample], path: str | Path) -> None:
    """Write training pairs as JSONL with fixed key order."""
    lines = [
        json.dumps({"left": e.left, "right": e.right, "label": e.label}, ensure_ascii=False)
        for e in examples
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def read_examples(path: str | Path) -> list[RelevanceExample]:
    path = Path(path)
    out: list[RelevanceExample] = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON ({exc.msg})", path=str(path), line=lineno) from exc
        if not isinstance(obj, dict):
            raise ParseError("expected a JSON object", path=str(path), line=lineno)
        try:
            out.append(
                RelevanceExample(
                    left=obj.get("left", ""),
                    right=obj.get("right", ""),
                    label=obj.get("label", -1),
                )
            )
        except ValidationError as exc:
            raise ParseError(str(exc), path=str(path), line=lineno) from exc
    return out


@dataclass(frozen=True)
class OverlapScorer:
    """Content-word overlap: |query ∩ answer| / |query|, clamped to [0, 1]."""

    analyzer: Analyzer

    def score_batch(self, pairs: Sequence[tuple[str, str]]) -> list[float]:
        scores = []
        for query, answer in pairs:
            q_content = set(run_analyzer(self.analyzer, query).content_words)
            if not q_content:
                scores.append(0.0)
                continue
            a_content = set(run_analyzer(self.analyzer, answer).content_words)
            ratio = len(q_content & a_content) / len(q_content)
            scores.append(min(1.0, max(0.0, ratio)))
        return scores


class RemoteScorer:
    """HTTP client for the /v1/score wire protocol.

    Batches larger than ``max_batch`` are split into sequential chunked
    requests (in-flight bound of one). Transport failures retry with
    exponential backoff; a reachable server that answers out of contract
    (wrong status, wrong length, score outside [0, 1]) raises ProtocolError
    immediately.
    """

    def __init__(
        self,
        base_url: str,
        *,
        timeout: float = 5.0,
        max_batch: int = 64,
        retries: int = 2,
        backoff: float = 0.2,
        transport: httpx.BaseTransport | None = None,
    ):
        if max_batch < 1:
            raise ValidationError(f"max_batch must be >= 1, got {max_batch}")
        if retries < 0:
            raise ValidationError(f"retries must be >= 0, got {retries}")
        self.base_url = base_url.rstrip("/")
        self.max_batch = max_batch
        self.retries = retries
        self.backoff = backoff
        self._client = httpx.Client(
            base_url=self.base_url, timeout=timeout, transport=transport
        )

    def close(self) -> None:
        self._client.close()

    def __enter__(self) -> "RemoteScorer":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def _post_chunk(self, chunk: Sequence[tuple[str, str]]) -> list[float]:
        payload = {"pairs": [{"query": q, "answer": a} for q, a in chunk]}
        last_exc: Exception | None = None
        for attempt in range(self.retries + 1):
            try:
                response = self._client.post("/v1/score", json=payload)
                break
            except httpx.TransportError as exc:
                last_exc = exc
                if attempt < self.retries:
                    time.sleep(self.backoff * (2**attempt))
        else:
            raise TransportError(f"scorer unreachable at {self.base_url}: {last_exc}")
        if response.status_code != 200:
            raise ProtocolError(f"scorer returned HTTP {response.status_code}")
        try:
            body = response.json()
        except ValueError as exc:
            raise ProtocolError(f"scorer returned non-JSON body: {exc}") from exc
        scores = body.get("scores") if isinstance(body, dict) else None
        if not isinstance(scores, list):
            raise ProtocolError("scorer response missing 'scores' list")
        if len(scores) != len(chunk):
            raise ProtocolError(
                f"scorer returned {len(scores)} scores for {len(chunk)} pairs"
            )
        out = []
        for value in scores:
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ProtocolError(f"score {value!r} is not a number")
            if not 0.0 <= float(value) <= 1.0:
                raise ProtocolError(f"score {value!r} outside [0, 1]")
            out.append(float(value))
        return out

    def score_batch(self, pairs: Sequence[tuple[str, str]]) -> list[float]:
        scores: list[float] = []
        for start in range(0, len(pairs), self.max_batch):
            scores.extend(self._post_chunk(pairs[start : start + self.max_batch]))
        return scores

    def health(self) -> bool:
        """True when the scorer's /health answers 200."""
        try:
            return self._client.get("/health").status_code == 200
        except httpx.HTTPError:
            return False


def search_relevance(
    scorer: RelevanceScorer,
    query: str,
    corpus: FaqCorpus,
    k: int,
) -> list[ScoredDoc]:
    """Score every corpus answer against the query; top-k, ties by id.

    Unlike the lexical leg, zero scores are kept: the scorer defines the
    whole ordering, so asking for k = len(corpus) yields a full permutation.
    """
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    pairs = [(query, entry.answer) for entry in corpus]
    scores = scorer.score_batch(pairs)
    if len(scores) != len(pairs):
        raise ProtocolError(
            f"scorer returned {len(scores)} scores for {len(pairs)} pairs"
        )
    scored = [
        ScoredDoc(faq_id=entry.id, score=float(score))
        for entry, score in zip(corpus, scores)
    ]
    scored.sort(key=lambda d: (-d.score, d.faq_id))
    return scored[:k]
