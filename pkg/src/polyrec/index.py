"""Read-only fielded inverted index with sublinear TF*IDF disjunctive retrieval.

Title and abstract are token fields (tf = token count per document);
controlled terms, authors and any extra entity field are keyword fields
matched on the whole case-folded value with tf fixed at 1.

Scoring: score(d) = sum over matching clauses (field, term) of
(1 + ln tf) * idf(field, term), with idf = 1 + ln(N / df) and no length
normalization. Results order by descending score, ties by ascending doc_id.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

from .corpus import (
    FIELD_ABSTRACT,
    FIELD_AUTHOR,
    FIELD_CONTROLLED,
    FIELD_TITLE,
    Document,
    tokenize,
)

if TYPE_CHECKING:
    from .expansion import ExpandedQuery


@dataclass(frozen=True)
class Ranking:
    """Scored documents for one topic, best first, at most ``cutoff`` entries."""

    topic_id: str
    entries: tuple[tuple[str, float], ...]
    cutoff: int


class FieldedIndex:
    """Immutable per-field postings plus document frequencies."""

    def __init__(self, postings, titles):
        self._postings = postings  # field -> term -> ((doc_id, tf), ...)
        self._titles = titles

    @property
    def doc_count(self) -> int:
        return len(self._titles)

    def fields(self) -> list[str]:
        return list(self._postings)

    def terms(self, field: str) -> list[str]:
        return sorted(self._postings.get(field, ()))

    def postings(self, field: str, term: str) -> tuple[tuple[str, int], ...]:
        return self._postings.get(field, {}).get(term.lower(), ())

    def df(self, field: str, term: str) -> int:
        return len(self.postings(field, term))

    def idf(self, field: str, term: str) -> float:
        """1 + ln(N / df) for df >= 1, else 0 so absent terms contribute nothing."""
        df = self.df(field, term)
        if df == 0:
            return 0.0
        return 1.0 + math.log(self.doc_count / df)

    def title(self, doc_id: str) -> str:
        return self._titles.get(doc_id, "")

    def search(self, query: "ExpandedQuery", k: int) -> Ranking:
        """Disjunctive TF*IDF retrieval over the query's (field, value) clauses.

        Documents matching no clause are excluded; keyword clause values are
        case-folded at lookup. ``k`` caps the result length.
        """
        if k < 1:
            raise ValueError("k must be >= 1")
        if not query.clauses:
            raise ValueError("query has no clauses")
        scores: dict[str, float] = {}
        for field_name, value in query.clauses:
            term = value.lower()
            idf = self.idf(field_name, term)
            if idf == 0.0:
                continue
            for doc_id, tf in self.postings(field_name, term):
                weight = (1.0 + math.log(tf)) * idf
                scores[doc_id] = scores.get(doc_id, 0.0) + weight
        ordered = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
        return Ranking(query.topic_id, tuple(ordered[:k]), k)


def build_index(corpus: Sequence[Document] | Iterable[Document]) -> FieldedIndex:
    """Build an immutable index; doc_ids must be unique."""
    postings: dict[str, dict[str, list[tuple[str, int]]]] = {
        FIELD_TITLE: {},
        FIELD_ABSTRACT: {},
        FIELD_CONTROLLED: {},
        FIELD_AUTHOR: {},
    }
    titles: dict[str, str] = {}

    def add(field_name: str, term: str, doc_id: str, tf: int) -> None:
        postings.setdefault(field_name, {}).setdefault(term, []).append((doc_id, tf))

    for document in corpus:
        if document.doc_id in titles:
            raise ValueError(f"duplicate doc_id {document.doc_id!r}")
        titles[document.doc_id] = document.title
        for term, tf in Counter(tokenize(document.title)).items():
            add(FIELD_TITLE, term, document.doc_id, tf)
        for term, tf in Counter(tokenize(document.abstract)).items():
            add(FIELD_ABSTRACT, term, document.doc_id, tf)
        for value in document.controlled_terms:
            add(FIELD_CONTROLLED, value.lower(), document.doc_id, 1)
        for value in document.authors:
            add(FIELD_AUTHOR, value.lower(), document.doc_id, 1)
        for field_name, values in document.extra_entities.items():
            for value in values:
                add(field_name, value.lower(), document.doc_id, 1)

    frozen = {
        field_name: {
            term: tuple(sorted(entries))
            for term, entries in terms.items()
        }
        for field_name, terms in postings.items()
    }
    return FieldedIndex(frozen, titles)
