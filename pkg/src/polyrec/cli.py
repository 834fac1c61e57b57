"""Command line interface: indexing, suggestion, search, experiments, synthesis, serving."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import (
    FIELD_AUTHOR,
    FIELD_CONTROLLED,
    CorpusError,
    Stoplist,
    load_corpus,
    load_qrels,
    load_topics,
    remove_stopwords,
    tokenize,
)
from .evaluation import (
    EvaluationError,
    RunResult,
    compare_runs,
    comparison_table_tsv,
    evaluate_run,
    render_comparison_table,
    write_run_file,
)
from .expansion import RunConfig, build_query, render_query
from .index import build_index
from .recommender import SuggestConfig, build_entity_postings, field_for_kind, suggest
from .synth import SynthParams, generate, write_collection

DEFAULT_N = 4
DEFAULT_K = 1000
DEFAULT_ALPHA = 0.05


def _probability(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number")
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"{text!r} is not a probability in [0, 1]")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 1:
        raise argparse.ArgumentTypeError("value must be >= 1")
    return value


def _non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 0:
        raise argparse.ArgumentTypeError("value must be >= 0")
    return value


def _stoplist(path: str | None) -> Stoplist:
    return Stoplist.load(path) if path else Stoplist.default()


def _read_corpus(path: str):
    with open(path, encoding="utf-8") as fp:
        return load_corpus(fp)


def _query_terms(text: str, stoplist: Stoplist) -> list[str]:
    terms = remove_stopwords(tokenize(text), stoplist)
    if not terms:
        raise ValueError("query is empty after tokenization and stopword removal")
    return terms


def cmd_index(args) -> int:
    corpus = _read_corpus(args.corpus)
    index = build_index(corpus)
    print(f"documents: {index.doc_count}")
    for field_name in index.fields():
        terms = index.terms(field_name)
        entries = sum(len(index.postings(field_name, t)) for t in terms)
        print(f"field {field_name}: {len(terms)} terms, {entries} postings")
    return 0


def cmd_suggest(args) -> int:
    corpus = _read_corpus(args.corpus)
    terms = _query_terms(args.query, _stoplist(args.stoplist))
    postings = build_entity_postings(corpus, field_for_kind(args.kind))
    for suggestion in suggest(postings, terms, SuggestConfig(n=args.n)):
        print(f"{suggestion.entity}\t{suggestion.kind}\t{suggestion.score:.6f}")
    return 0


def _expansions(corpus, terms, config: RunConfig, n: int):
    cfg = SuggestConfig(n=n)
    te = suggest(build_entity_postings(corpus, FIELD_CONTROLLED), terms, cfg) \
        if config.includes_terms else []
    ae = suggest(build_entity_postings(corpus, FIELD_AUTHOR), terms, cfg) \
        if config.includes_authors else []
    return te, ae


def cmd_search(args) -> int:
    from .corpus import Topic

    corpus = _read_corpus(args.corpus)
    terms = _query_terms(args.query, _stoplist(args.stoplist))
    config = RunConfig.parse(args.config)
    te, ae = _expansions(corpus, terms, config, args.n)
    query = build_query(Topic("query", tuple(terms)), te, ae, config)
    index = build_index(corpus)
    ranking = index.search(query, args.k)
    print(render_query(query))
    for rank, (doc_id, score) in enumerate(ranking.entries, 1):
        print(f"{rank}\t{doc_id}\t{score:.6f}\t{index.title(doc_id)}")
    return 0


def cmd_experiment(args) -> int:
    stoplist = _stoplist(args.stoplist)
    corpus = _read_corpus(args.corpus)
    with open(args.topics, encoding="utf-8") as fp:
        topics = load_topics(fp, stoplist)
    with open(args.qrels, encoding="utf-8") as fp:
        qrels = load_qrels(fp)

    config_names = args.config or [c.value for c in RunConfig]
    configs = list(dict.fromkeys(RunConfig.parse(name) for name in config_names))

    index = build_index(corpus)
    ct_postings = build_entity_postings(corpus, FIELD_CONTROLLED)
    au_postings = build_entity_postings(corpus, FIELD_AUTHOR)
    suggest_config = SuggestConfig(n=args.n)

    rankings = {config: {} for config in configs}
    for topic in sorted(topics, key=lambda t: t.topic_id):
        te = suggest(ct_postings, topic.terms, suggest_config)
        ae = suggest(au_postings, topic.terms, suggest_config)
        for config in configs:
            try:
                query = build_query(topic, te, ae, config)
            except ValueError as exc:
                raise ValueError(f"topic {topic.topic_id}: {exc}") from exc
            rankings[config][topic.topic_id] = index.search(query, args.k)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    reports = []
    for config in configs:
        run = RunResult(str(config), rankings[config])
        write_run_file(run, out_dir / f"{config}.run")
        reports.append(evaluate_run(run, qrels))

    baseline = str(RunConfig.BASELINE) if RunConfig.BASELINE in configs else str(configs[0])
    table = compare_runs(reports, baseline, alpha=args.alpha)
    text = render_comparison_table(table)
    (out_dir / "table.txt").write_text(text + "\n", encoding="utf-8")
    (out_dir / "table.tsv").write_text(comparison_table_tsv(table), encoding="utf-8")
    metadata = {
        "corpus": args.corpus,
        "topics": args.topics,
        "qrels": args.qrels,
        "configs": [str(c) for c in configs],
        "baseline": baseline,
        "n": args.n,
        "k": args.k,
        "alpha": args.alpha,
        "stoplist": args.stoplist or "builtin:english",
    }
    (out_dir / "metadata.json").write_text(
        json.dumps(metadata, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(text)
    return 0


def cmd_synth(args) -> int:
    params = SynthParams(
        topic_count=args.topic_count,
        docs_per_topic=args.docs_per_topic,
        distractor_docs=args.distractor_docs,
        terms_per_topic=args.terms_per_topic,
        controlled_per_topic=args.controlled_per_topic,
        topical_authors_per_topic=args.topical_authors_per_topic,
        promiscuous_authors=args.promiscuous_authors,
        term_noise=args.term_noise,
        seed=args.seed,
    )
    documents, topics, qrels = generate(params)
    paths = write_collection(documents, topics, qrels, args.out)
    print(f"wrote {len(documents)} documents, {len(topics)} topics, "
          f"{len(qrels)} judgments to {args.out}")
    for name, path in paths.items():
        print(f"  {name}: {path}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import build_state, create_app

    corpus = _read_corpus(args.corpus)
    state = build_state(corpus, stoplist=_stoplist(args.stoplist),
                        n=args.n, default_k=args.k)
    app = create_app(state, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyrec",
        description="Search term recommendation, query expansion, and retrieval evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="build the fielded index and report statistics")
    p.add_argument("--corpus", required=True)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("suggest", help="suggest co-occurring entities for a query")
    p.add_argument("--corpus", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--kind", default="author",
                   help="author, controlled_term, or an extra entity field name")
    p.add_argument("--n", type=_positive_int, default=DEFAULT_N)
    p.add_argument("--stoplist")
    p.set_defaults(func=cmd_suggest)

    p = sub.add_parser("search", help="run one expanded query against the corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--config", default="b", help="b, b+te, b+ae, or b+te+ae")
    p.add_argument("--n", type=_positive_int, default=DEFAULT_N)
    p.add_argument("--k", type=_positive_int, default=DEFAULT_K)
    p.add_argument("--stoplist")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("experiment", help="run all configurations and compare them")
    p.add_argument("--corpus", required=True)
    p.add_argument("--topics", required=True)
    p.add_argument("--qrels", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--config", action="append",
                   help="repeatable; defaults to b, b+te, b+ae, b+te+ae")
    p.add_argument("--n", type=_positive_int, default=DEFAULT_N)
    p.add_argument("--k", type=_positive_int, default=DEFAULT_K)
    p.add_argument("--alpha", type=_probability, default=DEFAULT_ALPHA)
    p.add_argument("--stoplist")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("synth", help="generate a synthetic corpus, topics, and qrels")
    p.add_argument("--out", required=True)
    p.add_argument("--topic-count", type=_non_negative_int, default=SynthParams.topic_count)
    p.add_argument("--docs-per-topic", type=_non_negative_int, default=SynthParams.docs_per_topic)
    p.add_argument("--distractor-docs", type=_non_negative_int, default=SynthParams.distractor_docs)
    p.add_argument("--terms-per-topic", type=_non_negative_int, default=SynthParams.terms_per_topic)
    p.add_argument("--controlled-per-topic", type=_non_negative_int,
                   default=SynthParams.controlled_per_topic)
    p.add_argument("--topical-authors-per-topic", type=_non_negative_int,
                   default=SynthParams.topical_authors_per_topic)
    p.add_argument("--promiscuous-authors", type=_non_negative_int,
                   default=SynthParams.promiscuous_authors)
    p.add_argument("--term-noise", type=_probability, default=SynthParams.term_noise)
    p.add_argument("--seed", type=int, default=SynthParams.seed)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("serve", help="serve suggestion and search over HTTP")
    p.add_argument("--corpus", required=True)
    p.add_argument("--stoplist")
    p.add_argument("--n", type=_positive_int, default=DEFAULT_N)
    p.add_argument("--k", type=_positive_int, default=10,
                   help="default result count for /search")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ui", help="directory of static UI files to mount at /ui")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CorpusError, EvaluationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
