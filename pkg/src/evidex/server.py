"""HTTP API over a loaded index.

Read-only endpoints under /api; CORS is open so the bundled web UI can run
from any origin. Parameter problems answer 400 (not the framework's default
422) and unknown ids answer 404.
"""

from __future__ import annotations

import os
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles

from . import analytics, schemas
from .index import EvidenceIndex
from .errors import EmptyQuery, EvidexError, UnknownEntityType
from .query import Bm25Params, RankingWeights, parse_query, search
from .storage import FORMAT_VERSION

ENV_INDEX_DIR = "EM_INDEX_DIR"
ENV_PORT = "EM_PORT"


def create_app(index: EvidenceIndex | None = None, index_dir: str | None = None,
               ui_dir: str | None = None) -> FastAPI:
    """Build the app; with neither index nor index_dir it serves 503s.

    index_dir falls back to the EM_INDEX_DIR environment variable. ui_dir,
    when given, is mounted at / for the static frontend build.
    """
    app = FastAPI(title="evidex", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    if index is None:
        index_dir = index_dir or os.environ.get(ENV_INDEX_DIR)
        if index_dir:
            from .storage import load

            index = load(index_dir)
    app.state.index = index

    def need_index() -> EvidenceIndex:
        if app.state.index is None:
            raise HTTPException(status_code=503, detail="no index loaded")
        return app.state.index

    @app.get("/api/health", response_model=schemas.HealthResponse)
    def health():
        idx = need_index()
        return schemas.HealthResponse(
            status="ok",
            format_version=FORMAT_VERSION,
            documents=len(idx.documents),
            sentences=idx.stats.n_sentences,
            patterns=len(idx.patterns),
            groups=len(idx.groups),
        )

    @app.get("/api/search", response_model=schemas.SearchResponse)
    def api_search(q: str = "", top: int = 10, offset: int = 0,
                   sigma: float = 1.0 / 3.0, theta: float = 1.0 / 3.0,
                   eta: float = 1.0 / 3.0, k: float = 1.2, b: float = 0.75,
                   normalize: bool = False):
        idx = need_index()
        if not q.strip():
            raise HTTPException(status_code=400, detail="q must not be empty")
        if top < 1:
            raise HTTPException(status_code=400, detail="top must be >= 1")
        if offset < 0:
            raise HTTPException(status_code=400, detail="offset must be >= 0")
        try:
            weights = RankingWeights(sigma=sigma, theta=theta, eta=eta)
            params = Bm25Params(k=k, b=b)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        try:
            parsed = parse_query(q, idx.lexicon, idx)
        except (EmptyQuery, UnknownEntityType) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        outcome = search(idx, parsed, weights=weights, params=params,
                         top_k=top, offset=offset, normalize=normalize)
        return schemas.search_response(idx, parsed, outcome, top=top, offset=offset)

    @app.get("/api/sentence/{sentence_id}", response_model=schemas.SentenceResponse)
    def api_sentence(sentence_id: int):
        idx = need_index()
        if not 0 <= sentence_id < len(idx.sentences):
            raise HTTPException(status_code=404, detail=f"no sentence {sentence_id}")
        return schemas.sentence_response(idx, sentence_id)

    @app.get("/api/doc/{doc_id}", response_model=schemas.DocResponse)
    def api_doc(doc_id: str, focus: int | None = None):
        idx = need_index()
        if doc_id not in idx.documents:
            raise HTTPException(status_code=404, detail=f"no document {doc_id!r}")
        return schemas.doc_response(idx, doc_id, focus_sentence_id=focus)

    @app.get("/api/analytics/entities", response_model=list[schemas.EntityFrequencyModel])
    def api_entities(type: str | None = None, top: int = 20):
        idx = need_index()
        if top < 1:
            raise HTTPException(status_code=400, detail="top must be >= 1")
        return [schemas.entity_model(r) for r in analytics.top_entities(idx, type, top)]

    @app.get("/api/analytics/relations", response_model=list[schemas.RelationFrequencyModel])
    def api_relations(top: int = 20, group_id: int | None = None):
        idx = need_index()
        if top < 1:
            raise HTTPException(status_code=400, detail="top must be >= 1")
        return [schemas.relation_model(r) for r in analytics.top_relations(idx, top, group_id)]

    @app.exception_handler(EvidexError)
    def evidex_error(_, exc: EvidexError):
        from fastapi.responses import JSONResponse

        return JSONResponse(status_code=500, content={"detail": str(exc)})

    if ui_dir:
        root = Path(ui_dir)
        if root.is_dir():
            app.mount("/", StaticFiles(directory=str(root), html=True), name="ui")

    return app
