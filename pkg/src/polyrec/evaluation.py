"""trec_eval style metrics, paired significance tests, and run comparison.

Conventions follow the trec_eval toolkit: unjudged documents count as
non-relevant, precision@k divides by k even when fewer documents were
retrieved, and topics without relevant documents are excluded from all
means. Aggregates are arithmetic means over the evaluated topics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Mapping, Sequence

from .corpus import Qrels
from .index import Ranking

PRECISION_CUTOFFS = (10, 20, 100)
PER_TOPIC_METRICS = ("AP", "rPrecision", "P@10", "P@20", "P@100")
AGGREGATE_METRICS = ("MAP", "rPrecision", "P@10", "P@20", "P@100")


class EvaluationError(ValueError):
    """Invalid evaluation input: unjudged topics, misaligned vectors, bad runs."""


@dataclass
class RunResult:
    """One retrieval run: a tag plus one ranking per topic."""

    run_tag: str
    rankings: dict[str, Ranking]


@dataclass
class MetricsReport:
    """Per-topic and aggregate metrics for one run.

    ``excluded_topics`` lists topics dropped from the means because the
    qrels contain no relevant document for them.
    """

    run_tag: str
    per_topic: dict[str, dict[str, float]]
    aggregate: dict[str, float]
    excluded_topics: tuple[str, ...] = ()


@dataclass
class SignificanceResult:
    metric: str
    t_statistic: float
    p_value: float
    alpha: float = 0.05
    significant: bool = False


@dataclass
class ComparisonRow:
    run_tag: str
    aggregate: dict[str, float]
    significance: dict[str, SignificanceResult] = field(default_factory=dict)
    best: frozenset[str] = frozenset()


@dataclass
class ComparisonTable:
    baseline_tag: str
    alpha: float
    metrics: tuple[str, ...]
    rows: tuple[ComparisonRow, ...]


def average_precision(ranking: Ranking, qrels: Qrels, topic_id: str | None = None) -> float:
    """Mean of precision at each relevant rank, divided by the total number of
    relevant documents for the topic; requires at least one relevant."""
    topic_id = ranking.topic_id if topic_id is None else topic_id
    total_relevant = qrels.relevant_count(topic_id)
    if total_relevant == 0:
        raise EvaluationError(f"topic {topic_id!r} has no relevant documents")
    hits = 0
    accumulated = 0.0
    for rank, (doc_id, _score) in enumerate(ranking.entries, 1):
        if qrels.is_relevant(topic_id, doc_id):
            hits += 1
            accumulated += hits / rank
    return accumulated / total_relevant


def precision_at_k(ranking: Ranking, qrels: Qrels, topic_id: str | None = None, k: int = 10) -> float:
    """Relevant documents among the top k, divided by k (even if fewer retrieved)."""
    if k < 1:
        raise EvaluationError("k must be >= 1")
    topic_id = ranking.topic_id if topic_id is None else topic_id
    hits = sum(1 for doc_id, _ in ranking.entries[:k] if qrels.is_relevant(topic_id, doc_id))
    return hits / k


def r_precision(ranking: Ranking, qrels: Qrels, topic_id: str | None = None) -> float:
    """Precision at rank R, where R is the topic's relevant-document count."""
    topic_id = ranking.topic_id if topic_id is None else topic_id
    total_relevant = qrels.relevant_count(topic_id)
    if total_relevant == 0:
        raise EvaluationError(f"topic {topic_id!r} has no relevant documents")
    hits = sum(
        1 for doc_id, _ in ranking.entries[:total_relevant]
        if qrels.is_relevant(topic_id, doc_id)
    )
    return hits / total_relevant


def _topic_metrics(ranking: Ranking, qrels: Qrels, topic_id: str) -> dict[str, float]:
    metrics = {
        "AP": average_precision(ranking, qrels, topic_id),
        "rPrecision": r_precision(ranking, qrels, topic_id),
    }
    for cutoff in PRECISION_CUTOFFS:
        metrics[f"P@{cutoff}"] = precision_at_k(ranking, qrels, topic_id, k=cutoff)
    return metrics


def evaluate_run(run: RunResult, qrels: Qrels) -> MetricsReport:
    """Per-topic metrics plus arithmetic-mean aggregates over topics with
    at least one relevant document; a run topic missing from the qrels is
    an error."""
    per_topic: dict[str, dict[str, float]] = {}
    excluded: list[str] = []
    for topic_id in sorted(run.rankings):
        if topic_id not in qrels.topics():
            raise EvaluationError(f"run topic {topic_id!r} is absent from the qrels")
        if qrels.relevant_count(topic_id) == 0:
            excluded.append(topic_id)
            continue
        per_topic[topic_id] = _topic_metrics(run.rankings[topic_id], qrels, topic_id)

    aggregate: dict[str, float] = {}
    evaluated = len(per_topic)
    for per_key, agg_key in zip(PER_TOPIC_METRICS, AGGREGATE_METRICS):
        if evaluated:
            aggregate[agg_key] = sum(values[per_key] for values in per_topic.values()) / evaluated
        else:
            aggregate[agg_key] = 0.0
    return MetricsReport(run.run_tag, per_topic, aggregate, tuple(excluded))


# --- Student's t machinery -------------------------------------------------
#
# The two-tailed p-value needs the Student-t CDF, computed here through the
# regularized incomplete beta function (continued-fraction expansion) so the
# package carries no statistics dependency.

def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    max_iterations = 300
    epsilon = 3e-14
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iterations + 1):
        m2 = 2 * m
        numerator = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + numerator * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + numerator / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        numerator = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + numerator * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + numerator / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < epsilon:
            break
    return h


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def student_t_two_tailed_p(t: float, df: int) -> float:
    """P(|T| >= |t|) for T Student-t distributed with ``df`` degrees of freedom."""
    if df < 1:
        raise EvaluationError("degrees of freedom must be >= 1")
    if math.isinf(t):
        return 0.0
    x = df / (df + t * t)
    return regularized_incomplete_beta(df / 2.0, 0.5, x)


def paired_t_test(
    a: Mapping[str, float] | Sequence[float],
    b: Mapping[str, float] | Sequence[float],
    alpha: float = 0.05,
    metric: str = "",
) -> SignificanceResult:
    """Two-tailed paired t-test on per-topic values.

    Mappings are aligned by topic id (identical key sets required); plain
    sequences are aligned by position. Zero variance with zero mean yields
    t = 0, p = 1; zero variance with nonzero mean is reported as the
    degenerate significant case with p = 0.
    """
    if isinstance(a, Mapping) or isinstance(b, Mapping):
        if not (isinstance(a, Mapping) and isinstance(b, Mapping)):
            raise EvaluationError("a and b must both be mappings or both sequences")
        if set(a) != set(b):
            raise EvaluationError("mismatched topic sets")
        keys = sorted(a)
        xs = [float(a[key]) for key in keys]
        ys = [float(b[key]) for key in keys]
    else:
        if len(a) != len(b):
            raise EvaluationError("paired vectors differ in length")
        xs = [float(v) for v in a]
        ys = [float(v) for v in b]

    m = len(xs)
    if m < 2:
        raise EvaluationError("need at least two paired observations")
    diffs = [x - y for x, y in zip(xs, ys)]
    mean_diff = sum(diffs) / m
    variance = sum((d - mean_diff) ** 2 for d in diffs) / (m - 1)
    if variance == 0.0:
        if mean_diff == 0.0:
            t_stat, p_value = 0.0, 1.0
        else:
            t_stat = math.inf if mean_diff > 0 else -math.inf
            p_value = 0.0
    else:
        t_stat = mean_diff / math.sqrt(variance / m)
        p_value = student_t_two_tailed_p(t_stat, m - 1)
    return SignificanceResult(metric, t_stat, p_value, alpha, p_value < alpha)


def compare_runs(
    reports: Sequence[MetricsReport],
    baseline_tag: str,
    alpha: float = 0.05,
) -> ComparisonTable:
    """Aggregate table with per-metric significance marks against the baseline
    and the best value per column flagged (earliest row wins ties)."""
    by_tag = {report.run_tag: report for report in reports}
    if baseline_tag not in by_tag:
        raise EvaluationError(f"baseline run {baseline_tag!r} not among the reports")
    baseline = by_tag[baseline_tag]

    rows: list[ComparisonRow] = []
    for report in reports:
        significance: dict[str, SignificanceResult] = {}
        if report.run_tag != baseline_tag:
            for per_key, agg_key in zip(PER_TOPIC_METRICS, AGGREGATE_METRICS):
                ours = {tid: values[per_key] for tid, values in report.per_topic.items()}
                theirs = {tid: values[per_key] for tid, values in baseline.per_topic.items()}
                significance[agg_key] = paired_t_test(ours, theirs, alpha, metric=agg_key)
        rows.append(ComparisonRow(report.run_tag, dict(report.aggregate), significance))

    for metric in AGGREGATE_METRICS:
        best_value = max(row.aggregate[metric] for row in rows)
        for row in rows:
            if row.aggregate[metric] == best_value:
                row.best = row.best | {metric}
                break
    return ComparisonTable(baseline_tag, alpha, AGGREGATE_METRICS, tuple(rows))


def _format_cell(row: ComparisonRow, metric: str) -> str:
    text = f"{row.aggregate[metric]:.4f}"
    if metric in row.best:
        text = f"[{text}]"
    significance = row.significance.get(metric)
    if significance is not None and significance.significant:
        text += "*"
    return text


def render_comparison_table(table: ComparisonTable) -> str:
    """Aligned plain-text table: one row per run, one column per metric."""
    header = ["run", *table.metrics]
    body = [[row.run_tag, *(_format_cell(row, m) for m in table.metrics)] for row in table.rows]
    widths = [max(len(line[i]) for line in [header, *body]) for i in range(len(header))]
    lines = []
    for cells in [header, *body]:
        first = cells[0].ljust(widths[0])
        rest = [cell.rjust(width) for cell, width in zip(cells[1:], widths[1:])]
        lines.append("  ".join([first, *rest]).rstrip())
    lines.append("")
    lines.append(
        f"baseline: {table.baseline_tag}; "
        f"* = significant vs baseline (two-tailed paired t-test, alpha={table.alpha:g}); "
        f"[value] = best in column"
    )
    return "\n".join(lines)


def comparison_table_tsv(table: ComparisonTable) -> str:
    """Long-format delimited records: run, metric, value, significant, p, best."""
    lines = ["run\tmetric\tvalue\tsignificant\tp_value\tbest"]
    for row in table.rows:
        for metric in table.metrics:
            significance = row.significance.get(metric)
            if significance is None:
                significant_text, p_text = "", ""
            else:
                significant_text = "true" if significance.significant else "false"
                p_text = f"{significance.p_value:.6f}"
            best_text = "true" if metric in row.best else "false"
            lines.append(
                f"{row.run_tag}\t{metric}\t{row.aggregate[metric]:.6f}"
                f"\t{significant_text}\t{p_text}\t{best_text}"
            )
    return "\n".join(lines) + "\n"


# --- TREC run files ---------------------------------------------------------

def write_run_file(run: RunResult, destination: str | Path | IO[str]) -> None:
    """Write ``topic_id Q0 doc_id rank score run_tag`` lines, topics in string
    order, ranks ascending; scores keep full float precision."""
    if not run.run_tag or any(ch.isspace() for ch in run.run_tag):
        raise EvaluationError(f"run tag {run.run_tag!r} must be non-empty without whitespace")
    if isinstance(destination, (str, Path)):
        with open(destination, "w", encoding="utf-8") as fp:
            write_run_file(run, fp)
        return
    for topic_id in sorted(run.rankings):
        for rank, (doc_id, score) in enumerate(run.rankings[topic_id].entries, 1):
            destination.write(f"{topic_id} Q0 {doc_id} {rank} {score!r} {run.run_tag}\n")


def read_run_file(source: str | Path | IO[str]) -> RunResult:
    """Load a TREC run file. Documents are re-sorted by descending score
    (ties by ascending doc_id); the rank column is not trusted, matching
    trec_eval. Topics that retrieved nothing cannot be represented."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fp:
            return read_run_file(fp)

    run_tag: str | None = None
    per_topic: dict[str, list[tuple[str, float]]] = {}
    seen: set[tuple[str, str]] = set()
    for lineno, line in enumerate(source, 1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 6:
            raise EvaluationError(f"run line {lineno}: expected 6 fields, got {len(parts)}")
        topic_id, _q0, doc_id, _rank, score_text, tag = parts
        try:
            score = float(score_text)
        except ValueError as exc:
            raise EvaluationError(f"run line {lineno}: bad score {score_text!r}") from exc
        if run_tag is None:
            run_tag = tag
        elif tag != run_tag:
            raise EvaluationError(f"run line {lineno}: mixed run tags {run_tag!r} and {tag!r}")
        if (topic_id, doc_id) in seen:
            raise EvaluationError(f"run line {lineno}: duplicate document {doc_id!r} for topic {topic_id!r}")
        seen.add((topic_id, doc_id))
        per_topic.setdefault(topic_id, []).append((doc_id, score))

    rankings = {}
    for topic_id, entries in per_topic.items():
        entries.sort(key=lambda entry: (-entry[1], entry[0]))
        rankings[topic_id] = Ranking(topic_id, tuple(entries), len(entries))
    return RunResult(run_tag or "", rankings)
