"""Shared fixtures: toy datasets, a trained bundle, and a live server."""

from __future__ import annotations

import json
import threading
import time
from pathlib import Path

import pytest
import uvicorn

from model_server import Example, TrainConfig, load_checkpoint, train
from model_server.server import create_app


def write_pairs(path: Path, rows: list[dict]) -> None:
    path.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")


def toy_rows() -> list[dict]:
    """Nine pairs (3 positive, 6 negative) over three mini FAQ entries."""
    entries = [
        ("how do i renew my permit", "permits renew at the city desk"),
        ("when does the library open", "the library opens at nine"),
        ("where do i pay a fine", "fines are paid at the cashier window"),
    ]
    rows = []
    for i, (q, a) in enumerate(entries):
        rows.append({"left": q, "right": a, "label": 1})
        for j, (_, other) in enumerate(entries):
            if j != i:
                rows.append({"left": q, "right": other, "label": 0})
    return rows


@pytest.fixture()
def toy_pairs_file(tmp_path) -> Path:
    path = tmp_path / "toy.jsonl"
    write_pairs(path, toy_rows())
    return path


@pytest.fixture(scope="session")
def toy_bundle(tmp_path_factory):
    """A checkpoint trained on the toy file; weights are arbitrary but servable."""
    root = tmp_path_factory.mktemp("toy_ckpt")
    data = root / "toy.jsonl"
    write_pairs(data, toy_rows())
    config = TrainConfig(
        data_path=str(data),
        checkpoint_dir=str(root / "ckpt"),
        epochs=1,
        batch_size=4,
        max_seq_len=24,
        seed=0,
        dev_fraction=0.2,
    )
    result = train(config)
    return load_checkpoint(result.checkpoint_dir)


class ServerThread:
    """uvicorn on an ephemeral loopback port, run in a daemon thread."""

    def __init__(self, app):
        self._server = uvicorn.Server(
            uvicorn.Config(app, host="127.0.0.1", port=0, log_level="error")
        )
        self._thread = threading.Thread(target=self._server.run, daemon=True)

    def __enter__(self) -> str:
        self._thread.start()
        deadline = time.monotonic() + 15
        while not self._server.started:
            if time.monotonic() > deadline:
                raise RuntimeError("server did not start in time")
            time.sleep(0.02)
        port = self._server.servers[0].sockets[0].getsockname()[1]
        return f"http://127.0.0.1:{port}"

    def __exit__(self, *exc_info) -> None:
        self._server.should_exit = True
        self._thread.join(timeout=10)


@pytest.fixture(scope="session")
def live_server_url(toy_bundle):
    with ServerThread(create_app(toy_bundle, max_batch=256)) as url:
        yield url
