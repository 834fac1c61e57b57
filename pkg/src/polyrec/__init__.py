"""polyrec: co-occurrence based search term recommendation, query expansion,
and TF*IDF retrieval evaluation for fielded document collections."""

from .corpus import (
    FIELD_ABSTRACT,
    FIELD_AUTHOR,
    FIELD_CONTROLLED,
    FIELD_TITLE,
    CorpusError,
    Document,
    Qrels,
    Stoplist,
    Topic,
    load_corpus,
    load_qrels,
    load_topics,
    remove_stopwords,
    tokenize,
)
from .expansion import ExpandedQuery, RunConfig, build_query, render_query
from .index import FieldedIndex, Ranking, build_index
from .recommender import (
    EntityPostings,
    SuggestConfig,
    Suggestion,
    build_entity_postings,
    jaccard,
    suggest,
)

__all__ = [
    "FIELD_ABSTRACT", "FIELD_AUTHOR", "FIELD_CONTROLLED", "FIELD_TITLE",
    "CorpusError", "Document", "Qrels", "Stoplist", "Topic",
    "load_corpus", "load_qrels", "load_topics", "remove_stopwords", "tokenize",
    "ExpandedQuery", "RunConfig", "build_query", "render_query",
    "FieldedIndex", "Ranking", "build_index",
    "EntityPostings", "SuggestConfig", "Suggestion",
    "build_entity_postings", "jaccard", "suggest",
]
