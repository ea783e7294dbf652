"""Training-pair file handling.

The on-disk format is JSONL with exactly the keys ``left`` (query text),
``right`` (answer text), ``label`` (0 or 1), one object per line; this is
the same shape the faqrank training-pair generator writes.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence, TypeVar

from .errors import DataError

T = TypeVar("T")


@dataclass(frozen=True)
class Example:
    left: str
    right: str
    label: int


def read_examples(path: str | Path) -> list[Example]:
    """Read and validate a training-pair file. Empty files are an error."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    out: list[Example] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: not valid JSON: {exc}") from exc
        if not isinstance(obj, dict) or set(obj) != {"left", "right", "label"}:
            raise DataError(
                f"{path}:{lineno}: expected exactly the keys left/right/label"
            )
        if not isinstance(obj["left"], str) or not isinstance(obj["right"], str):
            raise DataError(f"{path}:{lineno}: left and right must be strings")
        if obj["label"] not in (0, 1):
            raise DataError(f"{path}:{lineno}: label must be 0 or 1")
        out.append(Example(left=obj["left"], right=obj["right"], label=obj["label"]))
    if not out:
        raise DataError(f"{path}: no examples")
    return out


def write_examples(examples: Sequence[Example], path: str | Path) -> None:
    lines = [
        json.dumps(
            {"left": e.left, "right": e.right, "label": e.label}, ensure_ascii=False
        )
        for e in examples
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def train_dev_split(
    examples: Sequence[Example], dev_fraction: float, seed: int
) -> tuple[list[Example], list[Example]]:
    """Seeded shuffle, then carve the dev set off the front."""
    if not 0.0 < dev_fraction < 1.0:
        raise DataError(f"dev_fraction must be in (0, 1), got {dev_fraction}")
    if len(examples) < 2:
        raise DataError(f"need at least 2 examples to split, got {len(examples)}")
    shuffled = list(examples)
    random.Random(seed).shuffle(shuffled)
    dev_size = min(len(examples) - 1, max(1, round(len(examples) * dev_fraction)))
    return shuffled[dev_size:], shuffled[:dev_size]


def batches(items: Sequence[T], size: int) -> Iterator[Sequence[T]]:
    if size < 1:
        raise ValueError(f"batch size must be >= 1, got {size}")
    for start in range(0, len(items), size):
        yield items[start : start + size]
