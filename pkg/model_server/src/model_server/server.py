"""HTTP scoring service.

POST /v1/score takes {"pairs": [{"query", "answer"}, ...]} and answers
{"scores": [...]}, one positive-class probability per pair, in order.
Malformed bodies answer 400, batches over the limit 413. GET /health
answers 200 only once a model is attached, so clients polling it never see
a ready signal from a still-loading server.

One model instance serves everything: requests take a lock in arrival
order and each request's pairs are scored in model-sized micro-batches.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .model import ModelBundle

DEFAULT_MAX_BATCH = 256
DEFAULT_MICRO_BATCH = 64


class PairIn(BaseModel):
    query: str
    answer: str

    model_config = {"extra": "forbid"}


class ScoreRequest(BaseModel):
    pairs: list[PairIn]

    model_config = {"extra": "forbid"}


def create_app(
    bundle: ModelBundle | None = None,
    *,
    max_batch: int = DEFAULT_MAX_BATCH,
    micro_batch: int = DEFAULT_MICRO_BATCH,
) -> FastAPI:
    """Build the app; pass bundle=None to get a not-ready (503) instance."""
    app = FastAPI(title="faq-model-server", docs_url=None, redoc_url=None)
    app.state.bundle = bundle
    app.state.max_batch = max_batch
    app.state.micro_batch = micro_batch
    lock = threading.Lock()

    @app.exception_handler(RequestValidationError)
    async def malformed(request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": "malformed request body"})

    @app.post("/v1/score")
    def score(body: ScoreRequest) -> JSONResponse:
        bundle = app.state.bundle
        if bundle is None:
            return JSONResponse(status_code=503, content={"detail": "model not loaded"})
        if len(body.pairs) > app.state.max_batch:
            return JSONResponse(
                status_code=413,
                content={
                    "detail": f"batch of {len(body.pairs)} pairs exceeds the "
                    f"limit of {app.state.max_batch}"
                },
            )
        pairs = [(p.query, p.answer) for p in body.pairs]
        with lock:
            scores = bundle.score_pairs(pairs, micro_batch=app.state.micro_batch)
        return JSONResponse({"scores": scores})

    @app.get("/health")
    def health() -> JSONResponse:
        bundle = app.state.bundle
        if bundle is None:
            return JSONResponse(status_code=503, content={"status": "initializing"})
        return JSONResponse(
            {
                "status": "ok",
                "model": {
                    "base_model": bundle.meta.get("base_model"),
                    "vocab_size": bundle.meta.get("vocab_size"),
                    "max_seq_len": bundle.meta.get("max_seq_len"),
                    "format": bundle.meta.get("format"),
                },
                "max_batch": app.state.max_batch,
            }
        )

    return app
