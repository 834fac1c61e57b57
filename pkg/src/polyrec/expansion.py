"""Run configurations and construction of fielded disjunctive queries.

The four configurations share one baseline vocabulary:

  b         title/abstract clauses over the topic terms only
  b+te      adds controlled-term clauses; base terms and expansion terms both
            appear in the title/abstract and controlled-term groups
  b+ae      adds author clauses on top of the baseline
  b+te+ae   union of b+te and b+ae

Multi-word expansion values are matched token-by-token in the title/abstract
fields and verbatim in the keyword fields.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .corpus import FIELD_ABSTRACT, FIELD_AUTHOR, FIELD_CONTROLLED, FIELD_TITLE, Topic, tokenize
from .recommender import Suggestion


class RunConfig(Enum):
    BASELINE = "b"
    TERM_EXPANSION = "b+te"
    AUTHOR_EXPANSION = "b+ae"
    FULL = "b+te+ae"

    def __str__(self) -> str:
        return self.value

    @property
    def includes_terms(self) -> bool:
        return self in (RunConfig.TERM_EXPANSION, RunConfig.FULL)

    @property
    def includes_authors(self) -> bool:
        return self in (RunConfig.AUTHOR_EXPANSION, RunConfig.FULL)

    @classmethod
    def parse(cls, text: str) -> "RunConfig":
        normalized = text.strip().lower()
        for config in cls:
            if config.value == normalized:
                return config
        valid = ", ".join(c.value for c in cls)
        raise ValueError(f"unknown run configuration {text!r} (expected one of: {valid})")


@dataclass(frozen=True)
class ExpandedQuery:
    """Baseline terms plus accepted expansions, materialized as field clauses."""

    topic_id: str
    base_terms: tuple[str, ...]
    te_terms: tuple[str, ...]
    ae_names: tuple[str, ...]
    clauses: tuple[tuple[str, str], ...]


_FIELD_ORDER = {FIELD_TITLE: 0, FIELD_ABSTRACT: 1, FIELD_CONTROLLED: 2, FIELD_AUTHOR: 3}


def _dedup(values: Sequence[str]) -> tuple[str, ...]:
    return tuple(dict.fromkeys(values))


def build_query(
    topic: Topic,
    te: Sequence[Suggestion],
    ae: Sequence[Suggestion],
    config: RunConfig,
) -> ExpandedQuery:
    """Materialize ``config`` for ``topic`` with the accepted suggestions.

    Expansions are only consumed when the configuration calls for them; a
    configuration that requires an empty expansion list is an error.
    """
    te_terms = _dedup([s.entity for s in te]) if config.includes_terms else ()
    ae_names = _dedup([s.entity for s in ae]) if config.includes_authors else ()
    if config.includes_terms and not te_terms:
        raise ValueError(f"{config} requires a thesaurus-term expansion but none was given")
    if config.includes_authors and not ae_names:
        raise ValueError(f"{config} requires an author expansion but none was given")

    values = _dedup(tuple(topic.terms) + te_terms)
    tokens = _dedup([token for value in values for token in tokenize(value)])

    clause_set: set[tuple[str, str]] = set()
    for token in tokens:
        clause_set.add((FIELD_TITLE, token))
        clause_set.add((FIELD_ABSTRACT, token))
    if config.includes_terms:
        for value in values:
            clause_set.add((FIELD_CONTROLLED, value))
    if config.includes_authors:
        for name in ae_names:
            clause_set.add((FIELD_AUTHOR, name))

    clauses = tuple(sorted(clause_set, key=lambda c: (_FIELD_ORDER.get(c[0], 99), c[1])))
    return ExpandedQuery(
        topic_id=topic.topic_id,
        base_terms=tuple(topic.terms),
        te_terms=te_terms,
        ae_names=ae_names,
        clauses=clauses,
    )


def _display(value: str) -> str:
    return f'"{value}"' if re.search(r"\s", value) else value


def render_query(query: ExpandedQuery) -> str:
    """Deterministic multi-line rendering: one line per field group, values
    sorted within the group, multi-word values quoted."""
    present = {field for field, _ in query.clauses}
    groups: list[tuple[str, list[str]]] = []
    tiab_values = sorted(_dedup(query.base_terms + query.te_terms))
    if FIELD_TITLE in present or FIELD_ABSTRACT in present:
        groups.append(("TI/AB", tiab_values))
    if FIELD_CONTROLLED in present:
        groups.append((FIELD_CONTROLLED, tiab_values))
    if FIELD_AUTHOR in present:
        groups.append((FIELD_AUTHOR, sorted(query.ae_names)))

    lines = []
    for position, (label, group_values) in enumerate(groups):
        joined = " OR ".join(_display(v) for v in group_values)
        prefix = "OR " if position else ""
        lines.append(f"{prefix}{label} = ({joined})")
    return "\n".join(lines)
