"""HTTP search service over one immutable index.

The index is opened once at startup and shared read-only across requests;
the only mutable server state is a hit counter surfaced at /stats. All
endpoints are async and run on the event loop, so index and docstore
access is naturally serialized without locks. Pagination over the wire
uses non-negative pages only.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse, Response

from .docstore import Docstore
from .errors import EmptyQueryError, PageRangeError
from .index.reader import IndexReader
from .search import DEFAULT_B, DEFAULT_K1, result_indices, result_page


@dataclass
class ServiceConfig:
    index_path: str | Path
    shards_path: str | Path | None = None
    bind: str = "127.0.0.1:7860"
    results_cap: int = 1000
    page_size_cap: int = 100
    cors_origins: list[str] = field(default_factory=list)
    k1: float = DEFAULT_K1
    b: float = DEFAULT_B

    def __post_init__(self):
        if self.results_cap < 1 or self.page_size_cap < 1:
            raise ValueError("results_cap and page_size_cap must be positive")


def _error(status: int, error: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": error, "detail": detail})


def _json(payload) -> Response:
    body = json.dumps(payload, separators=(",", ":"), ensure_ascii=False)
    return Response(content=body, media_type="application/json")


def create_app(config: ServiceConfig) -> FastAPI:
    """Build the FastAPI application; opens the index eagerly."""
    reader = IndexReader(config.index_path)
    docstore = Docstore(reader, config.shards_path)
    started = time.monotonic()
    hits = {"search": 0}

    app = FastAPI(title="plugsearch", docs_url=None, redoc_url=None)

    if config.cors_origins:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=config.cors_origins,
            allow_methods=["GET"],
            allow_headers=["*"],
        )

    @app.get("/search")
    async def search(
        q: str = Query(default=""),
        k: int = Query(default=100),
        page: int = Query(default=0),
        per_page: int = Query(default=20),
    ):
        hits["search"] += 1
        if not q.strip():
            return _error(400, "empty-query", "parameter q must be a non-empty query")
        if not 1 <= k <= config.results_cap:
            return _error(400, "bad-request", f"k must be in 1..{config.results_cap}")
        if page < 0:
            return _error(400, "bad-request", "page must be >= 0")
        if not 1 <= per_page <= config.page_size_cap:
            return _error(
                400, "bad-request", f"per_page must be in 1..{config.page_size_cap}"
            )
        try:
            ranked = result_indices(q, k, reader, k1=config.k1, b=config.b)
        except EmptyQueryError as exc:
            return _error(400, "empty-query", str(exc))
        try:
            page_result = result_page(docstore, ranked, page, per_page)
        except PageRangeError as exc:
            return _error(400, "page-out-of-range", str(exc))
        return _json(
            {
                "query": q,
                "total_results": page_result.total_results,
                "page": page_result.page_number,
                "per_page": page_result.results_per_page,
                "rows": [
                    {
                        "id": row.id,
                        "score": row.score,
                        "text": row.text,
                        "metadata": row.metadata,
                        "snippet": row.snippet,
                    }
                    for row in page_result.rows
                ],
            }
        )

    @app.get("/document/{doc_id:path}")
    async def document(doc_id: str):
        record = docstore.get_by_external_id(doc_id)
        if record is None:
            return _error(404, "not-found", f"no document with id {doc_id!r}")
        return _json(
            {
                "id": record.external_id,
                "text": record.text,
                "metadata": record.metadata,
            }
        )

    @app.get("/healthz")
    async def healthz():
        return _json({"status": "ok", "num_docs": reader.num_docs})

    @app.get("/stats")
    async def stats():
        return _json(
            {
                **reader.stats.to_dict(),
                "uptime_seconds": time.monotonic() - started,
                "search_hits": hits["search"],
            }
        )

    return app


def serve(config: ServiceConfig) -> None:
    """Run the service until interrupted."""
    import uvicorn

    host, _, port = config.bind.partition(":")
    app = create_app(config)
    uvicorn.run(app, host=host, port=int(port or 7860), log_level="warning")
