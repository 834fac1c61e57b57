"""Entity suggestion by Jaccard co-occurrence between query tokens and entities.

An entity is any exact-valued field entry (author name, controlled term, or a
declared extra field such as a journal). An entity's score for a query is the
mean over query terms of the Jaccard similarity between the term's document
set (title/abstract occurrences) and the entity's document set.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .corpus import FIELD_AUTHOR, FIELD_CONTROLLED, Document, tokenize

KIND_AUTHOR = "author"
KIND_CONTROLLED_TERM = "controlled_term"


def kind_for_field(field: str) -> str:
    if field == FIELD_AUTHOR:
        return KIND_AUTHOR
    if field == FIELD_CONTROLLED:
        return KIND_CONTROLLED_TERM
    return field


def field_for_kind(kind: str) -> str:
    if kind == KIND_AUTHOR:
        return FIELD_AUTHOR
    if kind == KIND_CONTROLLED_TERM:
        return FIELD_CONTROLLED
    return kind


@dataclass(frozen=True)
class Suggestion:
    entity: str
    kind: str
    score: float

    def __post_init__(self):
        if not self.entity:
            raise ValueError("suggestion entity must be non-empty")
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"suggestion score {self.score} outside [0, 1]")


@dataclass(frozen=True)
class SuggestConfig:
    """Top-n cutoff and exclusive minimum score for suggestions."""

    n: int = 4
    min_score: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0.0 <= self.min_score < 1.0:
            raise ValueError("min_score must be in [0, 1)")


@dataclass(frozen=True)
class EntityPostings:
    """Document-id sets per entity value and per title/abstract token."""

    field: str
    postings: Mapping[str, frozenset[str]]
    term_postings: Mapping[str, frozenset[str]]


def build_entity_postings(corpus: Sequence[Document], field: str) -> EntityPostings:
    """Collect doc-id sets for every value of ``field`` (case-folded keys) and
    for every title/abstract token; unknown field names are an error."""
    corpus = list(corpus)
    if corpus and field not in (FIELD_AUTHOR, FIELD_CONTROLLED):
        declared = set()
        for document in corpus:
            declared.update(document.extra_entities)
        if field not in declared:
            raise ValueError(f"unknown entity field {field!r}")

    entity_docs: dict[str, set[str]] = {}
    term_docs: dict[str, set[str]] = {}
    for document in corpus:
        if field == FIELD_AUTHOR:
            values: Iterable[str] = document.authors
        elif field == FIELD_CONTROLLED:
            values = document.controlled_terms
        else:
            values = document.extra_entities.get(field, ())
        for value in values:
            entity_docs.setdefault(value.lower(), set()).add(document.doc_id)
        for token in tokenize(document.title):
            term_docs.setdefault(token, set()).add(document.doc_id)
        for token in tokenize(document.abstract):
            term_docs.setdefault(token, set()).add(document.doc_id)

    return EntityPostings(
        field=field,
        postings=MappingProxyType({k: frozenset(v) for k, v in entity_docs.items()}),
        term_postings=MappingProxyType({k: frozenset(v) for k, v in term_docs.items()}),
    )


def jaccard(a: frozenset[str] | set[str], b: frozenset[str] | set[str]) -> float:
    """|a & b| / |a | b|; two empty sets score 0."""
    if not a and not b:
        return 0.0
    intersection = len(a & b)
    if intersection == 0:
        return 0.0
    return intersection / len(a | b)


_EMPTY: frozenset[str] = frozenset()


def suggest(
    postings: EntityPostings,
    query_terms: Sequence[str],
    config: SuggestConfig | None = None,
    combine: str = "mean",
) -> list[Suggestion]:
    """Top-n entities for the query terms, scored in [0, 1].

    ``combine="mean"`` averages per-term Jaccard scores; ``combine="union"``
    scores each entity against the union of the terms' document sets. Terms
    absent from the corpus contribute empty sets. Entities scoring at or
    below ``config.min_score`` are dropped; ties order by entity string.
    """
    if not query_terms:
        raise ValueError("query_terms must be non-empty")
    if combine not in ("mean", "union"):
        raise ValueError(f"unknown combine mode {combine!r}")
    cfg = config or SuggestConfig()
    kind = kind_for_field(postings.field)

    if combine == "union":
        pooled: set[str] = set()
        for term in query_terms:
            pooled |= postings.term_postings.get(term, _EMPTY)

    scored: list[tuple[float, str]] = []
    for entity, entity_docs in postings.postings.items():
        if combine == "mean":
            total = 0.0
            for term in query_terms:
                total += jaccard(postings.term_postings.get(term, _EMPTY), entity_docs)
            score = total / len(query_terms)
        else:
            score = jaccard(pooled, entity_docs)
        if score > cfg.min_score:
            scored.append((score, entity))

    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    return [Suggestion(entity, kind, score) for score, entity in scored[: cfg.n]]
