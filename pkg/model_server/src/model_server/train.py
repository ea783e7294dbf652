"""Fine-tuning loop for the pair classifier.

train() reads a training-pair file, carves off a dev split, fits the model,
and writes a checkpoint directory plus a metrics.jsonl log (effective
hyperparameters first, then one line per epoch, then the final dev
accuracy). The log carries no timestamps so a seeded run reproduces it
byte for byte, within the determinism the framework gives us on one thread.
"""

from __future__ import annotations

import json
import random
import warnings
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

import torch
from torch import nn

from .data import Example, batches, read_examples, train_dev_split
from .errors import DataError, TrainError
from .model import (
    ArchSpec,
    ModelBundle,
    PairClassifier,
    pack_batch,
    positive_probability,
    resolve_preset,
    save_checkpoint,
)
from .textenc import PairEncoder, build_vocab

_OOM_MARKERS = ("out of memory", "not enough memory")


@dataclass
class TrainConfig:
    data_path: str
    checkpoint_dir: str
    base_model: str = "tiny"
    epochs: int = 3
    batch_size: int = 32
    learning_rate: float = 1e-3
    max_seq_len: int = 64
    seed: int = 0
    dev_fraction: float = 0.1

    def __post_init__(self) -> None:
        if not Path(self.data_path).exists():
            raise DataError(f"training data not found: {self.data_path}")
        for name in ("epochs", "batch_size", "max_seq_len"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise DataError(f"{name} must be a positive integer, got {value!r}")
        if self.learning_rate <= 0:
            raise DataError(f"learning_rate must be positive, got {self.learning_rate}")
        if not 0.0 < self.dev_fraction < 1.0:
            raise DataError(f"dev_fraction must be in (0, 1), got {self.dev_fraction}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or self.seed < 0:
            raise DataError(f"seed must be a non-negative integer, got {self.seed!r}")
        if self.max_seq_len < 4:
            raise DataError(
                f"max_seq_len must be >= 4 to fit a pair's framing tokens, "
                f"got {self.max_seq_len}"
            )
        resolve_preset(self.base_model)


@dataclass
class TrainResult:
    checkpoint_dir: str
    metrics_path: str
    epochs_run: int
    final_dev_accuracy: float


def evaluate_accuracy(
    model: PairClassifier,
    encoder: PairEncoder,
    examples: Sequence[Example],
    *,
    micro_batch: int = 64,
) -> float:
    """Fraction of examples where thresholding the score at 0.5 matches the label."""
    if not examples:
        raise DataError("cannot evaluate on an empty example list")
    model.eval()
    correct = 0
    with torch.inference_mode():
        for chunk in batches(examples, micro_batch):
            encoded = [encoder.encode(e.left, e.right) for e in chunk]
            ids, pad_mask = pack_batch(encoded, encoder.max_seq_len)
            probs = positive_probability(model(ids, pad_mask))
            for example, prob in zip(chunk, probs):
                correct += int((float(prob) >= 0.5) == bool(example.label))
    return correct / len(examples)


def _train_one_epoch(
    model: PairClassifier,
    encoder: PairEncoder,
    optimizer: torch.optim.Optimizer,
    examples: list[Example],
    batch_size: int,
    rng: random.Random,
) -> float:
    loss_fn = nn.CrossEntropyLoss()
    order = list(examples)
    rng.shuffle(order)
    model.train()
    total_loss = 0.0
    steps = 0
    for chunk in batches(order, batch_size):
        encoded = [encoder.encode(e.left, e.right) for e in chunk]
        ids, pad_mask = pack_batch(encoded, encoder.max_seq_len)
        labels = torch.tensor([e.label for e in chunk], dtype=torch.long)
        optimizer.zero_grad()
        loss = loss_fn(model(ids, pad_mask), labels)
        loss.backward()
        optimizer.step()
        total_loss += loss.item()
        steps += 1
    return total_loss / steps


def train(config: TrainConfig) -> TrainResult:
    """Fit the classifier per ``config`` and write checkpoint + metrics log."""
    examples = read_examples(config.data_path)
    train_ex, dev_ex = train_dev_split(examples, config.dev_fraction, config.seed)
    single_class = len({e.label for e in train_ex}) < 2
    if single_class:
        warnings.warn(
            "training split is single-class; the model will degenerate to a "
            "constant predictor",
            stacklevel=2,
        )

    torch.manual_seed(config.seed)
    vocab = build_vocab(t for e in train_ex for t in (e.left, e.right))
    encoder = PairEncoder(vocab=vocab, max_seq_len=config.max_seq_len)
    arch = resolve_preset(config.base_model)
    model = PairClassifier(len(vocab), config.max_seq_len, arch)
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)

    records: list[dict] = [
        {
            "config": asdict(config),
            "arch": asdict(arch),
            "train_examples": len(train_ex),
            "dev_examples": len(dev_ex),
            "vocab_size": len(vocab),
            "single_class": single_class,
        }
    ]
    dev_accuracy = 0.0
    for epoch in range(1, config.epochs + 1):
        rng = random.Random(config.seed * 100003 + epoch)
        try:
            train_loss = _train_one_epoch(
                model, encoder, optimizer, train_ex, config.batch_size, rng
            )
        except (RuntimeError, torch.OutOfMemoryError) as exc:
            message = str(exc).lower()
            if any(marker in message for marker in _OOM_MARKERS):
                raise TrainError(
                    f"out of memory with batch_size={config.batch_size} (sequence "
                    f"width {config.max_seq_len}); lower one of them and retry"
                ) from exc
            raise
        dev_accuracy = evaluate_accuracy(model, encoder, dev_ex)
        records.append(
            {"epoch": epoch, "train_loss": train_loss, "dev_accuracy": dev_accuracy}
        )
    records.append({"final_dev_accuracy": dev_accuracy})

    checkpoint_dir = Path(config.checkpoint_dir)
    save_checkpoint(
        checkpoint_dir,
        model,
        vocab,
        base_model=config.base_model,
        arch=arch,
        max_seq_len=config.max_seq_len,
        train_meta=asdict(config),
    )
    metrics_path = checkpoint_dir / "metrics.jsonl"
    metrics_path.write_text(
        "\n".join(json.dumps(r) for r in records) + "\n", encoding="utf-8"
    )
    return TrainResult(
        checkpoint_dir=str(checkpoint_dir),
        metrics_path=str(metrics_path),
        epochs_run=config.epochs,
        final_dev_accuracy=dev_accuracy,
    )


def bundle_from_training(config: TrainConfig) -> ModelBundle:
    """Train and immediately load the result; convenience for tests and demos."""
    from .model import load_checkpoint

    result = train(config)
    return load_checkpoint(result.checkpoint_dir)
