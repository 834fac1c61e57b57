"""Fielded document collections: loaders, normalization, relevance judgments.

File formats:
  corpus  UTF-8 JSON lines, one record per document with keys ``doc_id``,
          ``title``, ``abstract``, ``controlled_terms``, ``authors`` and an
          optional ``extra_entities`` map of additional entity fields.
  topics  UTF-8 lines ``topic_id<TAB>raw title text``.
  qrels   whitespace separated ``topic_id iteration doc_id grade`` lines
          (the iteration column is ignored).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from types import MappingProxyType
from typing import IO, Iterable, Mapping

FIELD_TITLE = "TI"
FIELD_ABSTRACT = "AB"
FIELD_CONTROLLED = "CT"
FIELD_AUTHOR = "AU"
RESERVED_FIELDS = (FIELD_TITLE, FIELD_ABSTRACT, FIELD_CONTROLLED, FIELD_AUTHOR)

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


class CorpusError(ValueError):
    """Malformed corpus, topics, or qrels input."""


def tokenize(text: str) -> list[str]:
    """Lowercase ``text`` and split on non-alphanumeric boundaries.

    Digits and diacritics are preserved; underscores act as separators.
    Stable under re-tokenization of the space-joined output.
    """
    return _TOKEN_RE.findall(text.lower())


def remove_stopwords(tokens: Iterable[str], stoplist: "Stoplist") -> list[str]:
    """Order-preserving stopword filter; the result may be empty."""
    return [t for t in tokens if t not in stoplist]


def _entity_values(values, what: str, where: str) -> tuple[str, ...]:
    # exact strings, stripped; duplicates collapse case-insensitively
    if not isinstance(values, (list, tuple)):
        raise CorpusError(f"{where}: {what} must be a list of strings")
    out: list[str] = []
    seen: set[str] = set()
    for value in values:
        if not isinstance(value, str):
            raise CorpusError(f"{where}: {what} must contain only strings")
        value = value.strip()
        if not value:
            continue
        key = value.lower()
        if key in seen:
            continue
        seen.add(key)
        out.append(value)
    return tuple(out)


@dataclass(frozen=True)
class Document:
    """One fielded record: free-text title/abstract plus exact-valued entities."""

    doc_id: str
    title: str = ""
    abstract: str = ""
    controlled_terms: tuple[str, ...] = ()
    authors: tuple[str, ...] = ()
    extra_entities: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.doc_id:
            raise CorpusError("document has empty doc_id")
        where = f"document {self.doc_id!r}"
        object.__setattr__(
            self, "controlled_terms",
            _entity_values(self.controlled_terms, "controlled_terms", where))
        object.__setattr__(
            self, "authors", _entity_values(self.authors, "authors", where))
        extras = {}
        for name, values in dict(self.extra_entities).items():
            if name in RESERVED_FIELDS:
                raise CorpusError(f"{where}: extra entity field {name!r} is reserved")
            cleaned = _entity_values(values, f"extra_entities[{name!r}]", where)
            if cleaned:
                extras[name] = cleaned
        object.__setattr__(self, "extra_entities", MappingProxyType(extras))

    def to_record(self) -> dict:
        record = {
            "doc_id": self.doc_id,
            "title": self.title,
            "abstract": self.abstract,
            "controlled_terms": list(self.controlled_terms),
            "authors": list(self.authors),
        }
        if self.extra_entities:
            record["extra_entities"] = {k: list(v) for k, v in self.extra_entities.items()}
        return record


@dataclass(frozen=True)
class Topic:
    """A query topic: normalized, stopword-free tokens."""

    topic_id: str
    terms: tuple[str, ...]

    def __post_init__(self):
        if not self.topic_id:
            raise CorpusError("topic has empty topic_id")
        if not self.terms:
            raise CorpusError(f"topic {self.topic_id!r} has no terms")
        object.__setattr__(self, "terms", tuple(self.terms))


class Qrels:
    """Relevance judgments keyed by (topic_id, doc_id).

    Grades are integers >= 0; a grade > 0 means relevant and unjudged pairs
    are implicitly non-relevant.
    """

    def __init__(self, judgments: Mapping[tuple[str, str], int]):
        cleaned: dict[tuple[str, str], int] = {}
        relevant: dict[str, set[str]] = {}
        for (topic_id, doc_id), grade in judgments.items():
            grade = int(grade)
            if grade < 0:
                raise CorpusError(
                    f"qrels: negative grade {grade} for topic {topic_id!r} doc {doc_id!r}")
            cleaned[(topic_id, doc_id)] = grade
            if grade > 0:
                relevant.setdefault(topic_id, set()).add(doc_id)
        self._judgments = cleaned
        self._relevant = {t: frozenset(d) for t, d in relevant.items()}
        self._topics = frozenset(t for t, _ in cleaned)

    @property
    def judgments(self) -> Mapping[tuple[str, str], int]:
        return MappingProxyType(self._judgments)

    def topics(self) -> frozenset[str]:
        return self._topics

    def grade(self, topic_id: str, doc_id: str) -> int:
        return self._judgments.get((topic_id, doc_id), 0)

    def is_relevant(self, topic_id: str, doc_id: str) -> bool:
        return self.grade(topic_id, doc_id) > 0

    def relevant_docs(self, topic_id: str) -> frozenset[str]:
        return self._relevant.get(topic_id, frozenset())

    def relevant_count(self, topic_id: str) -> int:
        return len(self.relevant_docs(topic_id))

    def __len__(self) -> int:
        return len(self._judgments)

    def __eq__(self, other) -> bool:
        return isinstance(other, Qrels) and self._judgments == other._judgments


@dataclass(frozen=True)
class Stoplist:
    """Exact-match stopword set, normalized with the corpus tokenizer."""

    words: frozenset[str]

    @classmethod
    def from_words(cls, words: Iterable[str]) -> "Stoplist":
        normalized: set[str] = set()
        for word in words:
            normalized.update(tokenize(word))
        return cls(frozenset(normalized))

    @classmethod
    def load(cls, path) -> "Stoplist":
        with open(path, encoding="utf-8") as fp:
            lines = (line.strip() for line in fp)
            return cls.from_words(line for line in lines if line and not line.startswith("#"))

    @classmethod
    def default(cls) -> "Stoplist":
        text = resources.files("polyrec").joinpath("data/stopwords_en.txt").read_text("utf-8")
        return cls.from_words(
            line.strip() for line in text.splitlines()
            if line.strip() and not line.startswith("#"))

    def __contains__(self, token: str) -> bool:
        return token in self.words

    def __len__(self) -> int:
        return len(self.words)


def _lines(stream: IO[str] | Iterable[str]) -> Iterable[str]:
    return stream


def load_corpus(stream: IO[str] | Iterable[str]) -> list[Document]:
    """Parse JSON-lines documents; errors carry the offending line number."""
    documents: list[Document] = []
    seen: set[str] = set()
    for lineno, line in enumerate(_lines(stream), 1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"corpus line {lineno}: invalid record ({exc.msg})") from exc
        if not isinstance(record, dict):
            raise CorpusError(f"corpus line {lineno}: record must be an object")
        doc_id = record.get("doc_id")
        if not doc_id or not isinstance(doc_id, str):
            raise CorpusError(f"corpus line {lineno}: missing doc_id")
        if doc_id in seen:
            raise CorpusError(f"corpus line {lineno}: duplicate doc_id {doc_id!r}")
        seen.add(doc_id)
        try:
            document = Document(
                doc_id=doc_id,
                title=record.get("title", ""),
                abstract=record.get("abstract", ""),
                controlled_terms=record.get("controlled_terms", ()),
                authors=record.get("authors", ()),
                extra_entities=record.get("extra_entities", {}),
            )
        except CorpusError as exc:
            raise CorpusError(f"corpus line {lineno}: {exc}") from exc
        documents.append(document)
    return documents


def write_corpus(documents: Iterable[Document], fp: IO[str]) -> None:
    for document in documents:
        fp.write(json.dumps(document.to_record(), ensure_ascii=False))
        fp.write("\n")


def load_topics(stream: IO[str] | Iterable[str], stoplist: Stoplist) -> list[Topic]:
    """Parse ``topic_id<TAB>title`` lines into tokenized, stopword-free topics."""
    topics: list[Topic] = []
    seen: set[str] = set()
    for lineno, line in enumerate(_lines(stream), 1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        topic_id, sep, raw = line.partition("\t")
        topic_id = topic_id.strip()
        if not sep or not topic_id:
            raise CorpusError(f"topics line {lineno}: expected 'topic_id<TAB>title'")
        if topic_id in seen:
            raise CorpusError(f"topics line {lineno}: duplicate topic_id {topic_id!r}")
        seen.add(topic_id)
        terms = remove_stopwords(tokenize(raw), stoplist)
        if not terms:
            raise CorpusError(
                f"topic {topic_id!r}: no terms left after stopword removal")
        topics.append(Topic(topic_id, tuple(terms)))
    return topics


def load_qrels(stream: IO[str] | Iterable[str]) -> Qrels:
    """Parse trec_eval style judgments: ``topic_id iter doc_id grade``."""
    judgments: dict[tuple[str, str], int] = {}
    for lineno, line in enumerate(_lines(stream), 1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 4:
            raise CorpusError(f"qrels line {lineno}: expected 4 fields, got {len(parts)}")
        topic_id, _iteration, doc_id, grade_text = parts
        try:
            grade = int(grade_text)
        except ValueError as exc:
            raise CorpusError(f"qrels line {lineno}: grade {grade_text!r} is not an integer") from exc
        if grade < 0:
            raise CorpusError(f"qrels line {lineno}: grade must be >= 0")
        key = (topic_id, doc_id)
        if key in judgments:
            raise CorpusError(
                f"qrels line {lineno}: duplicate judgment for topic {topic_id!r} doc {doc_id!r}")
        judgments[key] = grade
    return Qrels(judgments)


def write_qrels(qrels: Qrels, fp: IO[str]) -> None:
    for (topic_id, doc_id), grade in sorted(qrels.judgments.items()):
        fp.write(f"{topic_id} 0 {doc_id} {grade}\n")
