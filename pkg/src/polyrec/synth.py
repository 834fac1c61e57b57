"""Deterministic synthetic test collections with topic-correlated entities.

Every topic owns disjoint pools of title/abstract tokens, controlled terms,
and authors. Relevant documents draw from their topic's pools (with a
configurable leak of cross-topic "noise" tokens); distractor documents draw
from the global token pool and carry cross-topic authors. Those cross-topic
authors are the drift mechanism: they co-occur with every topic just enough
to enter the author suggestions, and expanding a query with them pulls in
their off-topic documents.

All randomness flows through an explicit SplitMix64 stream so identical
parameters and seed reproduce byte-identical collections in any language.
Update equations (64-bit wrapping arithmetic):

    state  = (state + 0x9E3779B97F4A7C15) mod 2^64
    z      = state
    z      = ((z XOR (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z      = ((z XOR (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    output = z XOR (z >> 31)

Derived draws: next_below(n) = output mod n; next_float() = (output >> 11) / 2^53.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path
from typing import Sequence

from .corpus import Document, Qrels, Topic, write_corpus, write_qrels

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """The SplitMix64 generator; see the module docstring for the equations."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def next_below(self, n: int) -> int:
        if n < 1:
            raise ValueError("n must be >= 1")
        return self.next_u64() % n

    def choice(self, items: Sequence):
        return items[self.next_below(len(items))]

    def sample(self, items: Sequence, k: int) -> list:
        """k distinct items via a partial Fisher-Yates shuffle."""
        if k > len(items):
            raise ValueError("sample larger than population")
        pool = list(items)
        for i in range(k):
            j = i + self.next_below(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]


@dataclass(frozen=True)
class SynthParams:
    """Knobs for the generated collection.

    The defaults are tuned so that, at desk scale, controlled-term expansion
    helps retrieval, author expansion alone drags it down through drift, and
    the combination recovers and wins. ``cross_author_*`` fields govern the
    drift: how often cross-topic authors cameo on relevant documents, and how
    many of them co-occur on each distractor.
    """

    topic_count: int = 25
    docs_per_topic: int = 8
    distractor_docs: int = 80
    terms_per_topic: int = 10
    controlled_per_topic: int = 5
    topical_authors_per_topic: int = 2
    promiscuous_authors: int = 3
    term_noise: float = 0.3
    seed: int = 42
    # shape of individual documents
    query_terms_per_topic: int = 2
    title_tokens: int = 4
    abstract_tokens: int = 8
    controlled_per_doc: int = 2
    controlled_coverage: float = 0.8
    cross_controlled_rate: float = 0.1
    author_coverage: float = 0.4
    cross_author_cameo_rate: float = 0.25
    cross_authors_per_distractor: int = 2
    distractor_controlled_rate: float = 0.6

    def validate(self) -> None:
        for name in (
            "topic_count", "docs_per_topic", "distractor_docs", "terms_per_topic",
            "controlled_per_topic", "topical_authors_per_topic", "promiscuous_authors",
            "query_terms_per_topic", "title_tokens", "abstract_tokens",
            "controlled_per_doc", "cross_authors_per_distractor",
        ):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        for name in (
            "term_noise", "controlled_coverage", "cross_controlled_rate",
            "author_coverage", "cross_author_cameo_rate", "distractor_controlled_rate",
        ):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")
        if self.topic_count > 0 and self.query_terms_per_topic > self.terms_per_topic:
            raise ValueError("query_terms_per_topic cannot exceed terms_per_topic")
        if self.topic_count > 0 and self.query_terms_per_topic < 1:
            raise ValueError("query_terms_per_topic must be >= 1 when topics are generated")


def _token_pool(topic: int, size: int) -> list[str]:
    return [f"topic{topic:03d}term{j:02d}" for j in range(size)]


def _controlled_pool(topic: int, size: int) -> list[str]:
    return [f"concept {topic:03d} area {j:02d}" for j in range(size)]


def _topical_authors(topic: int, count: int) -> list[str]:
    return [f"surname{topic:03d}{a:02d}, given{a:02d}" for a in range(count)]


def _cross_authors(count: int) -> list[str]:
    return [f"crossover{p:02d}, pan{p:02d}" for p in range(count)]


def generate(params: SynthParams) -> tuple[list[Document], list[Topic], Qrels]:
    """Generate (corpus, topics, qrels); identical params yield identical output."""
    params.validate()
    if params.topic_count == 0:
        return [], [], Qrels({})
    rng = SplitMix64(params.seed)

    token_pools = [_token_pool(t, params.terms_per_topic) for t in range(params.topic_count)]
    global_pool = [token for pool in token_pools for token in pool]
    controlled_pools = [
        _controlled_pool(t, params.controlled_per_topic) for t in range(params.topic_count)
    ]
    author_pools = [
        _topical_authors(t, params.topical_authors_per_topic) for t in range(params.topic_count)
    ]
    cross_authors = _cross_authors(params.promiscuous_authors)

    def draw_token(topic: int) -> str:
        if global_pool and rng.next_float() < params.term_noise:
            return global_pool[rng.next_below(len(global_pool))]
        pool = token_pools[topic]
        return pool[rng.next_below(len(pool))]

    documents: list[Document] = []
    topics: list[Topic] = []
    judgments: dict[tuple[str, str], int] = {}

    for t in range(params.topic_count):
        topic_id = f"{t + 1:03d}"
        query_terms = rng.sample(token_pools[t], params.query_terms_per_topic)
        topics.append(Topic(topic_id, tuple(query_terms)))

        for i in range(params.docs_per_topic):
            doc_id = f"doc-t{t:03d}-{i:02d}"
            # guarantee at least one query term so the baseline reaches every doc
            title_parts = [query_terms[i % len(query_terms)]]
            for _ in range(max(params.title_tokens - 1, 0)):
                title_parts.append(draw_token(t))
            abstract_parts = [draw_token(t) for _ in range(params.abstract_tokens)]

            controlled: list[str] = []
            if controlled_pools[t] and rng.next_float() < params.controlled_coverage:
                want = min(params.controlled_per_doc, len(controlled_pools[t]))
                controlled.extend(rng.sample(controlled_pools[t], want))
            if params.topic_count > 1 and rng.next_float() < params.cross_controlled_rate:
                other = (t + 1 + rng.next_below(params.topic_count - 1)) % params.topic_count
                if controlled_pools[other]:
                    controlled.append(rng.choice(controlled_pools[other]))

            authors: list[str] = []
            if author_pools[t]:
                if i < len(author_pools[t]):
                    authors.append(author_pools[t][i])  # every topical author covers >= 1 doc
                elif not controlled:
                    # complementary representations: uncurated docs are still
                    # reachable through their authors
                    authors.append(rng.choice(author_pools[t]))
                elif rng.next_float() < params.author_coverage:
                    authors.append(rng.choice(author_pools[t]))
            if cross_authors and rng.next_float() < params.cross_author_cameo_rate:
                authors.append(rng.choice(cross_authors))

            documents.append(Document(
                doc_id=doc_id,
                title=" ".join(title_parts),
                abstract=" ".join(abstract_parts),
                controlled_terms=tuple(controlled),
                authors=tuple(authors),
            ))
            judgments[(topic_id, doc_id)] = 1

    for j in range(params.distractor_docs):
        doc_id = f"doc-x-{j:03d}"
        if global_pool:
            title_parts = [global_pool[rng.next_below(len(global_pool))]
                           for _ in range(params.title_tokens)]
            abstract_parts = [global_pool[rng.next_below(len(global_pool))]
                              for _ in range(params.abstract_tokens)]
        else:
            title_parts, abstract_parts = ["filler"], ["filler"]

        controlled = []
        if controlled_pools and rng.next_float() < params.distractor_controlled_rate:
            for _ in range(params.controlled_per_doc):
                pool = controlled_pools[rng.next_below(len(controlled_pools))]
                if pool:
                    controlled.append(rng.choice(pool))

        authors = []
        if cross_authors:
            want = min(params.cross_authors_per_distractor, len(cross_authors))
            authors.extend(rng.sample(cross_authors, want))

        documents.append(Document(
            doc_id=doc_id,
            title=" ".join(title_parts),
            abstract=" ".join(abstract_parts),
            controlled_terms=tuple(controlled),
            authors=tuple(authors),
        ))

    return documents, topics, Qrels(judgments)


def write_collection(
    documents: Sequence[Document],
    topics: Sequence[Topic],
    qrels: Qrels,
    directory: str | Path,
) -> dict[str, Path]:
    """Write corpus.jsonl, topics.tsv and qrels.txt into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {
        "corpus": directory / "corpus.jsonl",
        "topics": directory / "topics.tsv",
        "qrels": directory / "qrels.txt",
    }
    with open(paths["corpus"], "w", encoding="utf-8") as fp:
        write_corpus(documents, fp)
    with open(paths["topics"], "w", encoding="utf-8") as fp:
        for topic in topics:
            fp.write(f"{topic.topic_id}\t{' '.join(topic.terms)}\n")
    with open(paths["qrels"], "w", encoding="utf-8") as fp:
        write_qrels(qrels, fp)
    return paths
