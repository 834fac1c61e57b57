"""HTTP JSON facade: suggestion and expanded search over one corpus snapshot.

Endpoints:
  GET /health                     corpus snapshot metadata
  GET /suggest?q=&kind=&n=        top-n co-occurring entities
  GET /search?q=&config=&k=&te=&ae=
                                  expanded retrieval; repeated te/ae params
                                  carry user-accepted expansions verbatim

Errors are ``{"error": code, "message": text}`` with a 4xx status. The state
is immutable after startup, so identical requests yield identical bodies.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse

from .corpus import (
    FIELD_ABSTRACT,
    FIELD_AUTHOR,
    FIELD_CONTROLLED,
    FIELD_TITLE,
    Document,
    Stoplist,
    Topic,
    remove_stopwords,
    tokenize,
)
from .expansion import RunConfig, build_query, render_query
from .index import FieldedIndex, build_index
from .recommender import (
    KIND_AUTHOR,
    KIND_CONTROLLED_TERM,
    EntityPostings,
    SuggestConfig,
    Suggestion,
    build_entity_postings,
    field_for_kind,
    kind_for_field,
    suggest,
)


class ServiceError(Exception):
    def __init__(self, status_code: int, code: str, message: str):
        super().__init__(message)
        self.status_code = status_code
        self.code = code
        self.message = message


@dataclass(frozen=True)
class ServiceState:
    """Everything the handlers read; built once from a single corpus snapshot."""

    index: FieldedIndex
    entity_postings: dict[str, EntityPostings]
    stoplist: Stoplist
    suggest_config: SuggestConfig
    default_k: int = 10


def build_state(
    corpus: Sequence[Document],
    stoplist: Stoplist | None = None,
    n: int = 4,
    default_k: int = 10,
) -> ServiceState:
    corpus = list(corpus)
    extra_fields = sorted({name for doc in corpus for name in doc.extra_entities})
    entity_fields = [FIELD_AUTHOR, FIELD_CONTROLLED, *extra_fields]
    return ServiceState(
        index=build_index(corpus),
        entity_postings={f: build_entity_postings(corpus, f) for f in entity_fields},
        stoplist=stoplist or Stoplist.default(),
        suggest_config=SuggestConfig(n=n),
        default_k=default_k,
    )


def _terms(state: ServiceState, q: str) -> list[str]:
    terms = remove_stopwords(tokenize(q), state.stoplist)
    if not terms:
        raise ServiceError(400, "empty_query",
                           "query is empty after tokenization and stopword removal")
    return terms


def _suggestions(state: ServiceState, field: str, terms: list[str],
                 config: SuggestConfig) -> list[Suggestion]:
    return suggest(state.entity_postings[field], terms, config)


def _accepted(values: list[str], kind: str) -> list[Suggestion]:
    return [Suggestion(v, kind, 0.0) for v in values if v.strip()]


def create_app(state: ServiceState, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="polyrec", docs_url=None, redoc_url=None)

    @app.exception_handler(ServiceError)
    async def handle_service_error(_request: Request, exc: ServiceError):
        return JSONResponse(status_code=exc.status_code,
                            content={"error": exc.code, "message": exc.message})

    @app.get("/health")
    def health():
        return {
            "doc_count": state.index.doc_count,
            "fields": state.index.fields(),
            "suggest_n": state.suggest_config.n,
        }

    @app.get("/suggest")
    def suggest_endpoint(q: str = "", kind: str = KIND_AUTHOR, n: int | None = None):
        field = field_for_kind(kind)
        postings = state.entity_postings.get(field)
        if postings is None:
            raise ServiceError(400, "unknown_kind",
                               f"no entity field configured for kind {kind!r}")
        terms = _terms(state, q)
        config = state.suggest_config
        if n is not None:
            try:
                config = replace(config, n=n)
            except ValueError as exc:
                raise ServiceError(400, "invalid_n", str(exc)) from exc
        suggestions = _suggestions(state, field, terms, config)
        return {
            "suggestions": [
                {"entity": s.entity, "kind": s.kind, "score": round(s.score, 6)}
                for s in suggestions
            ]
        }

    @app.get("/search")
    def search_endpoint(
        q: str = "",
        config: str = "b",
        k: int | None = None,
        te: list[str] | None = Query(default=None),
        ae: list[str] | None = Query(default=None),
    ):
        try:
            run_config = RunConfig.parse(config)
        except ValueError as exc:
            raise ServiceError(400, "unknown_config", str(exc)) from exc
        terms = _terms(state, q)
        cutoff = state.default_k if k is None else k
        if cutoff < 1:
            raise ServiceError(400, "invalid_k", "k must be >= 1")

        # an omitted te/ae parameter means "compute the top-n for me"; a
        # provided one (even an explicitly empty `te=`) is the user's accepted
        # subset, used verbatim
        te_suggestions: list[Suggestion] = []
        ae_suggestions: list[Suggestion] = []
        if run_config.includes_terms:
            te_suggestions = (_suggestions(state, FIELD_CONTROLLED, terms,
                                           state.suggest_config)
                              if te is None else _accepted(te, KIND_CONTROLLED_TERM))
        if run_config.includes_authors:
            ae_suggestions = (_suggestions(state, FIELD_AUTHOR, terms,
                                           state.suggest_config)
                              if ae is None else _accepted(ae, KIND_AUTHOR))

        topic = Topic("query", tuple(terms))
        try:
            query = build_query(topic, te_suggestions, ae_suggestions, run_config)
        except ValueError as exc:
            raise ServiceError(400, "missing_expansion", str(exc)) from exc
        ranking = state.index.search(query, cutoff)
        return {
            "rendered_query": render_query(query),
            "results": [
                {"doc_id": doc_id, "score": round(score, 6),
                 "title": state.index.title(doc_id)}
                for doc_id, score in ranking.entries
            ],
        }

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
