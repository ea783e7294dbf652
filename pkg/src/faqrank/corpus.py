"""Corpus, query-set, and run-file data model with JSONL / TREC-style IO.

All readers report the offending 1-based line on failure; all writers emit
UTF-8 with LF line endings so a write/read cycle is an identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .errors import EmptyCorpusError, ParseError, ValidationError

GRADES = ("A", "B", "C", "D")


@dataclass(frozen=True)
class FaqEntry:
    """One FAQ pair: a canonical question and its curated answer."""

    id: str
    question: str
    answer: str
    source: str = ""

    def __post_init__(self) -> None:
        if not self.id:
            raise ValidationError("entry id must be non-empty")
        if not self.question.strip():
            raise ValidationError(f"entry {self.id!r}: question must be non-empty")
        if not self.answer.strip():
            raise ValidationError(f"entry {self.id!r}: answer must be non-empty")


@dataclass(frozen=True)
class FaqCorpus:
    """An ordered FAQ collection from one site or dump."""

    entries: tuple[FaqEntry, ...]
    source: str = ""
    _by_id: dict[str, FaqEntry] = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self) -> None:
        if not self.entries:
            raise EmptyCorpusError("corpus has no entries")
        by_id: dict[str, FaqEntry] = {}
        for entry in self.entries:
            if entry.id in by_id:
                raise ValidationError(f"duplicate entry id {entry.id!r}")
            by_id[entry.id] = entry
        object.__setattr__(self, "_by_id", by_id)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __contains__(self, entry_id: str) -> bool:
        return entry_id in self._by_id

    def get(self, entry_id: str) -> FaqEntry | None:
        return self._by_id.get(entry_id)

    def ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.entries)


@dataclass(frozen=True)
class QueryRecord:
    """A user query with graded judgments mapping faq_id -> grade (A..D)."""

    qid: str
    text: str
    judgments: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.qid:
            raise ValidationError("qid must be non-empty")
        for faq_id, grade in self.judgments.items():
            if grade not in GRADES:
                raise ValidationError(
                    f"query {self.qid!r}: grade {grade!r} for {faq_id!r} "
                    f"is not one of {'/'.join(GRADES)}"
                )
        object.__setattr__(self, "judgments", dict(self.judgments))


def _read_jsonl(path: str | Path) -> Iterable[tuple[int, dict]]:
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON ({exc.msg})", path=str(path), line=lineno) from exc
        if not isinstance(obj, dict):
            raise ParseError("expected a JSON object", path=str(path), line=lineno)
        yield lineno, obj


def _require_str(obj: dict, key: str, path: str, lineno: int) -> str:
    value = obj.get(key)
    if not isinstance(value, str):
        raise ParseError(
            f"field {key!r} missing or not a string", path=path, line=lineno
        )
    return value


def load_faq_corpus(path: str | Path, source: str | None = None) -> FaqCorpus:
    """Load a JSONL corpus of {"id", "question", "answer", "source"} objects.

    ``source`` on individual lines is optional; the corpus-level source is the
    explicit argument, else the single source shared by all entries, else the
    file stem.
    """
    path = Path(path)
    entries: list[FaqEntry] = []
    for lineno, obj in _read_jsonl(path):
        entry_source = obj.get("source", "")
        if not isinstance(entry_source, str):
            raise ParseError("field 'source' must be a string", path=str(path), line=lineno)
        try:
            entries.append(
                FaqEntry(
                    id=_require_str(obj, "id", str(path), lineno),
                    question=_require_str(obj, "question", str(path), lineno),
                    answer=_require_str(obj, "answer", str(path), lineno),
                    source=entry_source,
                )
            )
        except ValidationError as exc:
            raise ParseError(str(exc), path=str(path), line=lineno) from exc
    if not entries:
        raise EmptyCorpusError(f"{path}: corpus has no entries")
    if source is None:
        distinct = {e.source for e in entries if e.source}
        source = distinct.pop() if len(distinct) == 1 else path.stem
    return FaqCorpus(entries=tuple(entries), source=source)


def load_query_set(path: str | Path) -> tuple[QueryRecord, ...]:
    """Load a JSONL query set of {"qid", "text", "judgments"} objects."""
    path = Path(path)
    records: list[QueryRecord] = []
    seen: set[str] = set()
    for lineno, obj in _read_jsonl(path):
        qid = _require_str(obj, "qid", str(path), lineno)
        text = _require_str(obj, "text", str(path), lineno)
        judgments = obj.get("judgments", {})
        if not isinstance(judgments, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in judgments.items()
        ):
            raise ParseError(
                "field 'judgments' must map faq ids to grade strings",
                path=str(path),
                line=lineno,
            )
        if qid in seen:
            raise ParseError(f"duplicate qid {qid!r}", path=str(path), line=lineno)
        seen.add(qid)
        try:
            records.append(QueryRecord(qid=qid, text=text, judgments=judgments))
        except ValidationError as exc:
            raise ParseError(str(exc), path=str(path), line=lineno) from exc
    return tuple(records)


@dataclass(frozen=True)
class RunEntry:
    """One ranked result line: qid, faq_id, 1-based rank, score, and a tag."""

    qid: str
    faq_id: str
    rank: int
    score: float
    tag: str = "faqrank"

    def __post_init__(self) -> None:
        for name in ("qid", "faq_id", "tag"):
            value = getattr(self, name)
            if not value or any(ch.isspace() for ch in value):
                raise ValidationError(
                    f"{name} must be non-empty and contain no whitespace: {value!r}"
                )
        if self.rank < 1:
            raise ValidationError(f"rank must be >= 1, got {self.rank}")


def validate_run(entries: Iterable[RunEntry]) -> None:
    """Check per-query rank contiguity (1..n) and score monotonicity."""
    per_qid: dict[str, dict[int, float]] = {}
    for entry in entries:
        ranks = per_qid.setdefault(entry.qid, {})
        if entry.rank in ranks:
            raise ValidationError(f"qid {entry.qid!r}: duplicate rank {entry.rank}")
        ranks[entry.rank] = entry.score
    for qid, ranks in per_qid.items():
        expected = set(range(1, len(ranks) + 1))
        if set(ranks) != expected:
            raise ValidationError(f"qid {qid!r}: ranks are not contiguous from 1")
        ordered = [ranks[r] for r in sorted(ranks)]
        for prev, cur in zip(ordered, ordered[1:]):
            if cur > prev:
                raise ValidationError(f"qid {qid!r}: scores increase with rank")


def write_run(entries: Iterable[RunEntry], path: str | Path) -> None:
    """Write a run file: ``<qid> Q0 <faq_id> <rank> <score> <tag>`` per line."""
    entries = list(entries)
    validate_run(entries)
    lines = [
        f"{e.qid} Q0 {e.faq_id} {e.rank} {float(e.score)!r} {e.tag}" for e in entries
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def read_run(path: str | Path) -> tuple[RunEntry, ...]:
    """Read and validate a run file written by write_run (or any conforming tool)."""
    path = Path(path)
    entries: list[RunEntry] = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 6:
            raise ParseError(
                f"expected 6 whitespace-separated fields, got {len(parts)}",
                path=str(path),
                line=lineno,
            )
        qid, literal, faq_id, rank_s, score_s, tag = parts
        if literal != "Q0":
            raise ParseError(f"second field must be 'Q0', got {literal!r}",
                             path=str(path), line=lineno)
        try:
            rank = int(rank_s)
            score = float(score_s)
        except ValueError as exc:
            raise ParseError(str(exc), path=str(path), line=lineno) from exc
        try:
            entries.append(RunEntry(qid=qid, faq_id=faq_id, rank=rank, score=score, tag=tag))
        except ValidationError as exc:
            raise ParseError(str(exc), path=str(path), line=lineno) from exc
    validate_run(entries)
    return tuple(entries)
