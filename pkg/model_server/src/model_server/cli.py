"""Command-line interface: train a checkpoint, serve a checkpoint.

Failures print one JSON line on stderr and exit 1; the kind field tells
data problems, checkpoint problems, and training failures apart.
"""

from __future__ import annotations

import functools
import json
import sys

import click
import uvicorn

from .errors import CheckpointError, DataError, ModelServerError, TrainError
from .model import PRESETS, load_checkpoint
from .server import DEFAULT_MAX_BATCH, create_app
from .train import TrainConfig, train


def _fail(kind: str, exc: BaseException) -> None:
    click.echo(json.dumps({"error": {"kind": kind, "message": str(exc)}}), err=True)
    sys.exit(1)


def guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except DataError as exc:
            _fail("data", exc)
        except CheckpointError as exc:
            _fail("checkpoint", exc)
        except TrainError as exc:
            _fail("train", exc)
        except (ModelServerError, OSError) as exc:
            _fail("error", exc)

    return wrapper


@click.group()
def main() -> None:
    """Relevance model service: train and serve /v1/score."""


@main.command("train")
@click.option("--data", "data_path", required=True, type=click.Path())
@click.option("--out", "checkpoint_dir", required=True, type=click.Path())
@click.option(
    "--base-model",
    default="tiny",
    show_default=True,
    type=click.Choice(sorted(PRESETS)),
)
@click.option("--epochs", default=3, show_default=True, type=int)
@click.option("--batch-size", default=32, show_default=True, type=int)
@click.option("--learning-rate", default=1e-3, show_default=True, type=float)
@click.option("--max-seq-len", default=64, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--dev-fraction", default=0.1, show_default=True, type=float)
@guarded
def train_cmd(**kwargs) -> None:
    """Fine-tune the pair classifier on a training-pair JSONL file."""
    config = TrainConfig(**kwargs)
    result = train(config)
    click.echo(
        f"trained {result.epochs_run} epochs -> {result.checkpoint_dir} "
        f"(dev accuracy {result.final_dev_accuracy:.3f})"
    )


@main.command("serve")
@click.option("--checkpoint", "checkpoint_dir", required=True, type=click.Path())
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8600, show_default=True, type=int)
@click.option("--max-batch", default=DEFAULT_MAX_BATCH, show_default=True, type=int)
@guarded
def serve_cmd(checkpoint_dir: str, host: str, port: int, max_batch: int) -> None:
    """Serve POST /v1/score and GET /health from a trained checkpoint."""
    bundle = load_checkpoint(checkpoint_dir)
    app = create_app(bundle, max_batch=max_batch)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
