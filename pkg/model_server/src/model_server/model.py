"""The pair classifier and its checkpoint format.

A small Transformer encoder over ``[CLS] left [SEP] right [SEP]``; the
[CLS] state feeds a two-way classifier and the served relevance score is
the positive-class probability. Architectures are named presets (the
``base_model`` of a training run); checkpoints are a directory of
config.json, vocab.json, and weights.pt stamped with a format version.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

import torch
from torch import nn

from .errors import CheckpointError
from .textenc import PAD_ID, PairEncoder, Vocab

CHECKPOINT_FORMAT = 1


@dataclass(frozen=True)
class ArchSpec:
    d_model: int
    n_heads: int
    n_layers: int
    d_ff: int
    dropout: float = 0.1


PRESETS: dict[str, ArchSpec] = {
    "tiny": ArchSpec(d_model=64, n_heads=4, n_layers=2, d_ff=128),
    "mini": ArchSpec(d_model=128, n_heads=4, n_layers=4, d_ff=256),
}


def resolve_preset(name: str) -> ArchSpec:
    try:
        return PRESETS[name]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise CheckpointError(f"unknown base model {name!r}; known presets: {known}")


class PairClassifier(nn.Module):
    def __init__(self, vocab_size: int, max_seq_len: int, arch: ArchSpec):
        super().__init__()
        self.token_embedding = nn.Embedding(vocab_size, arch.d_model, padding_idx=PAD_ID)
        self.position_embedding = nn.Embedding(max_seq_len, arch.d_model)
        layer = nn.TransformerEncoderLayer(
            d_model=arch.d_model,
            nhead=arch.n_heads,
            dim_feedforward=arch.d_ff,
            dropout=arch.dropout,
            batch_first=True,
        )
        # The nested-tensor fast path changes numerics with padding; keep it off
        # so a pair's score never depends on its batch-mates.
        self.encoder = nn.TransformerEncoder(
            layer, num_layers=arch.n_layers, enable_nested_tensor=False
        )
        self.classifier = nn.Linear(arch.d_model, 2)

    def forward(self, ids: torch.Tensor, pad_mask: torch.Tensor) -> torch.Tensor:
        positions = torch.arange(ids.shape[1], device=ids.device)
        hidden = self.token_embedding(ids) + self.position_embedding(positions)
        hidden = self.encoder(hidden, src_key_padding_mask=pad_mask)
        return self.classifier(hidden[:, 0])


def pack_batch(
    encoded: Sequence[Sequence[int]], width: int
) -> tuple[torch.Tensor, torch.Tensor]:
    """Right-pad id sequences to ``width``; mask marks the padded positions."""
    ids = torch.full((len(encoded), width), PAD_ID, dtype=torch.long)
    pad_mask = torch.ones((len(encoded), width), dtype=torch.bool)
    for row, seq in enumerate(encoded):
        ids[row, : len(seq)] = torch.tensor(seq, dtype=torch.long)
        pad_mask[row, : len(seq)] = False
    return ids, pad_mask


def positive_probability(logits: torch.Tensor) -> torch.Tensor:
    return torch.softmax(logits, dim=-1)[:, 1]


@dataclass
class ModelBundle:
    """A loaded model plus everything needed to score raw text pairs."""

    model: PairClassifier
    encoder: PairEncoder
    meta: dict

    def score_pairs(
        self, pairs: Sequence[tuple[str, str]], *, micro_batch: int = 64
    ) -> list[float]:
        """Positive-class probability per (query, answer) pair, in order.

        Every micro-batch is padded to the model's full window, so a pair's
        score does not depend on the lengths of its batch-mates; kernel
        scheduling still varies with batch size, leaving differences below
        1e-6 between chunkings.
        """
        self.model.eval()
        width = self.encoder.max_seq_len
        scores: list[float] = []
        with torch.inference_mode():
            for start in range(0, len(pairs), micro_batch):
                chunk = pairs[start : start + micro_batch]
                encoded = [self.encoder.encode(q, a) for q, a in chunk]
                ids, pad_mask = pack_batch(encoded, width)
                probs = positive_probability(self.model(ids, pad_mask))
                scores.extend(float(p) for p in probs)
        return scores


def save_checkpoint(
    directory: str | Path,
    model: PairClassifier,
    vocab: Vocab,
    *,
    base_model: str,
    arch: ArchSpec,
    max_seq_len: int,
    train_meta: dict,
) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    config = {
        "format": CHECKPOINT_FORMAT,
        "base_model": base_model,
        "arch": asdict(arch),
        "vocab_size": len(vocab),
        "max_seq_len": max_seq_len,
        "train": train_meta,
    }
    (directory / "config.json").write_text(
        json.dumps(config, indent=2) + "\n", encoding="utf-8"
    )
    (directory / "vocab.json").write_text(
        json.dumps({"tokens": vocab.to_list()}) + "\n", encoding="utf-8"
    )
    torch.save(model.state_dict(), directory / "weights.pt")


def load_checkpoint(directory: str | Path) -> ModelBundle:
    directory = Path(directory)
    try:
        config = json.loads((directory / "config.json").read_text(encoding="utf-8"))
        vocab_doc = json.loads((directory / "vocab.json").read_text(encoding="utf-8"))
    except OSError as exc:
        raise CheckpointError(f"cannot read checkpoint {directory}: {exc}") from exc
    except ValueError as exc:
        raise CheckpointError(f"corrupt checkpoint {directory}: {exc}") from exc
    if config.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointError(
            f"checkpoint format {config.get('format')!r} is not supported "
            f"(expected {CHECKPOINT_FORMAT})"
        )
    vocab = Vocab.from_list(vocab_doc["tokens"])
    arch = ArchSpec(**config["arch"])
    model = PairClassifier(len(vocab), config["max_seq_len"], arch)
    try:
        state = torch.load(directory / "weights.pt", map_location="cpu", weights_only=True)
        model.load_state_dict(state)
    except (OSError, RuntimeError, ValueError) as exc:
        raise CheckpointError(f"cannot load weights from {directory}: {exc}") from exc
    model.eval()
    encoder = PairEncoder(vocab=vocab, max_seq_len=config["max_seq_len"])
    return ModelBundle(model=model, encoder=encoder, meta=config)
