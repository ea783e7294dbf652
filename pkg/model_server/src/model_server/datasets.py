"""Loader for the public StackExchange FAQ retrieval benchmark.

Expects a directory holding faq.jsonl ({"id", "question", "answer"} per
line) and queries.jsonl ({"qid", "text", "judgments"} per line), the same
shapes the faqrank CLI consumes, and verifies the benchmark's published
geometry: 719 question-answer pairs and 1250 queries.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import DataError

EXPECTED_FAQ_PAIRS = 719
EXPECTED_QUERIES = 1250


def _read_jsonl(path: Path, required_keys: set[str]) -> list[dict]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    rows: list[dict] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: not valid JSON: {exc}") from exc
        if not isinstance(obj, dict) or not required_keys.issubset(obj):
            missing = sorted(required_keys - set(obj)) if isinstance(obj, dict) else []
            raise DataError(f"{path}:{lineno}: missing keys {missing}")
        rows.append(obj)
    return rows


def load_stackexchange_dir(directory: str | Path) -> tuple[list[dict], list[dict]]:
    """Load (faq_entries, queries) and verify the expected corpus sizes."""
    directory = Path(directory)
    entries = _read_jsonl(directory / "faq.jsonl", {"id", "question", "answer"})
    queries = _read_jsonl(directory / "queries.jsonl", {"qid", "text", "judgments"})
    if len(entries) != EXPECTED_FAQ_PAIRS:
        raise DataError(
            f"expected {EXPECTED_FAQ_PAIRS} FAQ pairs, found {len(entries)}"
        )
    if len(queries) != EXPECTED_QUERIES:
        raise DataError(f"expected {EXPECTED_QUERIES} queries, found {len(queries)}")
    return entries, queries
