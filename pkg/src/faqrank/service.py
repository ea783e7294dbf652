"""HTTP facade over the search engine.

POST /v1/search runs a fused search (degrading to the lexical leg when a
remote scorer is unreachable), GET /v1/faq/{id} returns one entry, GET
/health reports readiness. Malformed request bodies answer 400; an app
created without an engine answers 503 until one is attached, which is the
state a server is in while still loading.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .config import AppConfig
from .engine import SearchEngine
from .errors import ProtocolError


class SearchRequest(BaseModel):
    query: str
    top_k: int = Field(default=10, ge=1)

    model_config = {"extra": "forbid"}


def create_app(config: AppConfig, engine: SearchEngine | None = None) -> FastAPI:
    """Build the app; pass engine=None to get a not-ready (503) instance."""
    app = FastAPI(title="faqrank", docs_url=None, redoc_url=None)
    app.state.config = config
    app.state.engine = engine

    @app.exception_handler(RequestValidationError)
    async def malformed(request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": "malformed request body"})

    @app.exception_handler(ProtocolError)
    async def scorer_protocol(request: Request, exc: ProtocolError) -> JSONResponse:
        return JSONResponse(status_code=502, content={"detail": str(exc)})

    def ready() -> SearchEngine | None:
        return app.state.engine

    @app.post("/v1/search")
    def search(body: SearchRequest) -> JSONResponse:
        engine = ready()
        if engine is None:
            return JSONResponse(status_code=503, content={"detail": "index not ready"})
        result = engine.search(body.query, top_k=body.top_k)
        return JSONResponse(
            {"results": engine.result_rows(result), "degraded": result.degraded}
        )

    @app.get("/v1/faq/{faq_id}")
    def get_faq(faq_id: str) -> JSONResponse:
        engine = ready()
        if engine is None:
            return JSONResponse(status_code=503, content={"detail": "index not ready"})
        entry = engine.entry(faq_id)
        if entry is None:
            return JSONResponse(
                status_code=404, content={"detail": f"unknown faq id {faq_id!r}"}
            )
        return JSONResponse(
            {
                "id": entry.id,
                "question": entry.question,
                "answer": entry.answer,
                "source": entry.source,
            }
        )

    @app.get("/health")
    def health() -> JSONResponse:
        engine = ready()
        if engine is None:
            return JSONResponse(
                {"status": "initializing", "index_size": 0, "scorer": None}
            )
        return JSONResponse(
            {
                "status": "ok",
                "index_size": engine.index.doc_count,
                "scorer": engine.scorer_status(),
            }
        )

    return app
