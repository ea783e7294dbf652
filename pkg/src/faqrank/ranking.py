"""Shared ranking vocabulary: scored documents and the tie-break rule.

Every ranked list in the package orders by score descending, then faq id
ascending, so equal inputs always produce equal output order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class ScoredDoc:
    faq_id: str
    score: float


def rank_docs(scored: Iterable[ScoredDoc], k: int | None = None) -> list[ScoredDoc]:
    """Sort by (score desc, faq_id asc); truncate to k when given."""
    ordered = sorted(scored, key=lambda d: (-d.score, d.faq_id))
    return ordered if k is None else ordered[:k]
