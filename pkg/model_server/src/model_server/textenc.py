"""Tokenization, vocabulary, and sequence-pair encoding.

The model sees a pair as ``[CLS] left [SEP] right [SEP]``, ids padded to a
fixed width. When a pair overflows the width the right-hand text (the
answer) loses tokens from its end first; only a left text that alone fills
the window gets cut.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

PAD_ID = 0
UNK_ID = 1
CLS_ID = 2
SEP_ID = 3
RESERVED_TOKENS = ("[PAD]", "[UNK]", "[CLS]", "[SEP]")

_TOKEN_RE = re.compile(r"\w+", re.UNICODE)

# [CLS] plus two [SEP], the fixed framing cost of a pair.
SPECIALS_PER_PAIR = 3


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens; anything that is not a word character splits."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class Vocab:
    """Token table. Index in ``tokens`` is the id; ids 0..3 are reserved."""

    tokens: tuple[str, ...]
    _index: dict[str, int] = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self) -> None:
        if tuple(self.tokens[: len(RESERVED_TOKENS)]) != RESERVED_TOKENS:
            raise ValueError("vocab must start with the reserved tokens")
        object.__setattr__(
            self, "_index", {tok: i for i, tok in enumerate(self.tokens)}
        )

    def __len__(self) -> int:
        return len(self.tokens)

    def id(self, token: str) -> int:
        return self._index.get(token, UNK_ID)

    def to_list(self) -> list[str]:
        return list(self.tokens)

    @classmethod
    def from_list(cls, tokens: Sequence[str]) -> "Vocab":
        return cls(tokens=tuple(tokens))


def build_vocab(
    texts: Iterable[str], *, min_count: int = 1, max_size: int | None = None
) -> Vocab:
    """Frequency-ordered vocab over the tokens of ``texts``.

    Ties break lexicographically so the same corpus always yields the same
    table regardless of input order.
    """
    counts: Counter[str] = Counter()
    for text in texts:
        counts.update(tokenize(text))
    kept = sorted(
        (tok for tok, n in counts.items() if n >= min_count),
        key=lambda tok: (-counts[tok], tok),
    )
    if max_size is not None:
        budget = max_size - len(RESERVED_TOKENS)
        if budget < 0:
            raise ValueError(f"max_size must be >= {len(RESERVED_TOKENS)}")
        kept = kept[:budget]
    return Vocab(tokens=RESERVED_TOKENS + tuple(kept))


@dataclass(frozen=True)
class PairEncoder:
    """Turns (left, right) text pairs into fixed-width id sequences."""

    vocab: Vocab
    max_seq_len: int

    def __post_init__(self) -> None:
        if self.max_seq_len < SPECIALS_PER_PAIR + 1:
            raise ValueError(
                f"max_seq_len must be >= {SPECIALS_PER_PAIR + 1} to fit the "
                f"framing tokens, got {self.max_seq_len}"
            )

    def encode(self, left: str, right: str) -> list[int]:
        """Unpadded ids, never longer than max_seq_len."""
        left_ids = [self.vocab.id(t) for t in tokenize(left)]
        right_ids = [self.vocab.id(t) for t in tokenize(right)]
        budget = self.max_seq_len - SPECIALS_PER_PAIR
        if len(left_ids) > budget:
            left_ids = left_ids[:budget]
        right_ids = right_ids[: budget - len(left_ids)]
        return [CLS_ID, *left_ids, SEP_ID, *right_ids, SEP_ID]
