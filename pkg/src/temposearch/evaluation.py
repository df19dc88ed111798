"""Recall evaluation against search-engine click logs.

Clicked URLs are the ground truth: a query's recall is the fraction of its
clicked URLs that tag-based retrieval finds inside the evaluation window.
On top of per-query recall the module aggregates: overall average,
popularity buckets by query frequency, top-X curves over the best-recalled
queries, the tag-free upper bound (all URLs in the window), and a temporal
sweep that widens the window month by month into past and future.

Averages are computed over exact rationals and only converted to float at
the edges, so aggregate equalities and monotonicity hold exactly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

from .corpus import NormalizedUrl, QueryLogRecord
from .index import TemporalTagIndex
from .mapping import TagMapping
from .months import TimeWindow

GRANULARITIES = ("host", "full")

POPULARITY_BUCKETS = ((1, 10), (11, 100), (101, 1000), (1001, None))


@dataclass(frozen=True, slots=True)
class GroundTruth:
    """Click evidence for one query: what was clicked and how often asked."""

    query: str
    clicked: frozenset[NormalizedUrl]
    query_count: int
    log_anchor: TimeWindow


@dataclass(frozen=True, slots=True)
class QueryRecall:
    query: str
    recall: float
    retrieved_count: int
    matched: frozenset[NormalizedUrl]
    missed: frozenset[NormalizedUrl]
    query_count: int

    @property
    def recall_exact(self) -> Fraction:
        return Fraction(len(self.matched), len(self.matched) + len(self.missed))


@dataclass(frozen=True, slots=True)
class BucketRow:
    """One popularity bucket: query-count range, size, and mean recall."""

    low: int
    high: int | None
    num_queries: int
    avg_recall: float | None

    @property
    def label(self) -> str:
        return f"{self.low}-{self.high}" if self.high is not None else f">{self.low - 1}"


@dataclass(frozen=True, slots=True)
class RecallReport:
    per_query: tuple[QueryRecall, ...]
    average: float | None
    evaluable_count: int
    buckets: tuple[BucketRow, ...]
    top_x_curve: tuple[tuple[int, float], ...]


@dataclass(frozen=True, slots=True)
class SweepCell:
    past_months: int
    future_months: int
    average_recall: float


def _match_key(url: NormalizedUrl, granularity: str) -> str:
    if granularity == "host":
        return url.host
    if granularity == "full":
        return url.full
    raise ValueError(f"unknown granularity {granularity!r}")


def extract_ground_truth(
    log: Iterable[QueryLogRecord], query: str, granularity: str = "host"
) -> GroundTruth | None:
    """Collect the clicked URLs for `query` from a log.

    Queries match case-insensitively after whitespace trimming. Clicked
    URLs are collapsed to the chosen granularity, so two clicks on one
    host count once at host granularity. The anchor window spans the WHOLE
    log, not just the matching records. Returns None when nothing matched
    (the query is not evaluable against this log).
    """
    wanted = query.strip().lower()
    clicked: set[NormalizedUrl] = set()
    count = 0
    first = last = None
    for record in log:
        if first is None or record.month < first:
            first = record.month
        if last is None or record.month > last:
            last = record.month
        if record.query.strip().lower() == wanted:
            count += 1
            if granularity == "host":
                host = record.clicked.host
                clicked.add(NormalizedUrl(host=host, path="", full=host))
            else:
                clicked.add(record.clicked)
    if count == 0 or first is None:
        return None
    return GroundTruth(
        query=query,
        clicked=frozenset(clicked),
        query_count=count,
        log_anchor=TimeWindow(first, last),
    )


def recall(
    retrieved: Iterable[NormalizedUrl], truth: GroundTruth, granularity: str = "host"
) -> float:
    """|clicked ∩ retrieved| / |clicked| under the chosen granularity.

    Host granularity matches on host alone, so it never scores below full
    granularity for the same inputs.
    """
    if not truth.clicked:
        raise ValueError(f"query {truth.query!r} has no clicked URLs")
    keys = {_match_key(url, granularity) for url in retrieved}
    hits = sum(1 for url in truth.clicked if _match_key(url, granularity) in keys)
    return hits / len(truth.clicked)


def _query_recall(
    retrieved: set[NormalizedUrl], truth: GroundTruth, granularity: str
) -> QueryRecall:
    keys = {_match_key(url, granularity) for url in retrieved}
    matched = frozenset(u for u in truth.clicked if _match_key(u, granularity) in keys)
    missed = truth.clicked - matched
    return QueryRecall(
        query=truth.query,
        recall=len(matched) / len(truth.clicked),
        retrieved_count=len(retrieved),
        matched=matched,
        missed=missed,
        query_count=truth.query_count,
    )


def _average(values: Sequence[Fraction]) -> Fraction | None:
    if not values:
        return None
    return sum(values, Fraction(0)) / len(values)


def _retrieved_urls(
    index: TemporalTagIndex, mapping: TagMapping, window: TimeWindow
) -> set[NormalizedUrl]:
    return index.urls_for_tags(mapping.tags, window)


def evaluate_query(
    index: TemporalTagIndex,
    mapping: TagMapping,
    truth: GroundTruth,
    window: TimeWindow,
    granularity: str = "host",
) -> QueryRecall:
    """Recall of one query's mapped-tag retrieval against its clicks."""
    return _query_recall(_retrieved_urls(index, mapping, window), truth, granularity)


def default_top_x_values(n: int) -> list[int]:
    """1, 2, 5, 10, 20, 50, ... clipped to n, with n itself always last."""
    values = []
    step = 1
    while step <= n:
        for factor in (1, 2, 5):
            x = factor * step
            if x <= n:
                values.append(x)
        step *= 10
    if n >= 1 and (not values or values[-1] != n):
        values.append(n)
    return values


def top_x_order(per_query: Sequence[QueryRecall]) -> list[QueryRecall]:
    """Best queries first: recall desc, query frequency desc, query asc."""
    return sorted(per_query, key=lambda q: (-q.recall_exact, -q.query_count, q.query))


def top_x_curve(
    per_query: Sequence[QueryRecall], x_values: Sequence[int]
) -> list[tuple[int, float]]:
    """Average recall over the X best-recalled queries, per X.

    `x_values` must be ascending and within 1..len(per_query).
    """
    if list(x_values) != sorted(set(x_values)):
        raise ValueError("x_values must be strictly ascending")
    ordered = top_x_order(per_query)
    curve = []
    prefix = Fraction(0)
    taken = 0
    for x in x_values:
        if not 1 <= x <= len(ordered):
            raise ValueError(f"X={x} out of range 1..{len(ordered)}")
        while taken < x:
            prefix += ordered[taken].recall_exact
            taken += 1
        curve.append((x, float(prefix / x)))
    return curve


def popularity_buckets(per_query: Sequence[QueryRecall]) -> tuple[BucketRow, ...]:
    """Group queries by how often they were asked; mean recall per bucket.

    All four decade buckets are always present, empty ones with no average.
    """
    rows = []
    for low, high in POPULARITY_BUCKETS:
        members = [
            q
            for q in per_query
            if q.query_count >= low and (high is None or q.query_count <= high)
        ]
        avg = _average([q.recall_exact for q in members])
        rows.append(
            BucketRow(
                low=low,
                high=high,
                num_queries=len(members),
                avg_recall=None if avg is None else float(avg),
            )
        )
    return tuple(rows)


def evaluate_all(
    index: TemporalTagIndex,
    mappings: Mapping[str, TagMapping],
    log: Sequence[QueryLogRecord],
    window: TimeWindow,
    granularity: str = "host",
    x_values: Sequence[int] | None = None,
) -> RecallReport:
    """Evaluate every mapped query with click evidence in `log`.

    Queries without any matching log record are skipped (not scored zero);
    the report says how many were evaluable. Per-query rows are ordered by
    query string.
    """
    per_query = []
    for query in sorted(mappings):
        truth = extract_ground_truth(log, query, granularity)
        if truth is None:
            continue
        per_query.append(evaluate_query(index, mappings[query], truth, window, granularity))
    average = _average([q.recall_exact for q in per_query])
    if x_values is None:
        x_values = default_top_x_values(len(per_query))
    curve = top_x_curve(per_query, x_values) if per_query else []
    return RecallReport(
        per_query=tuple(per_query),
        average=None if average is None else float(average),
        evaluable_count=len(per_query),
        buckets=popularity_buckets(per_query),
        top_x_curve=tuple(curve),
    )


def unmapped_recall(
    index: TemporalTagIndex,
    truth: GroundTruth,
    window: TimeWindow,
    granularity: str = "host",
) -> float:
    """Recall if tags are ignored and every URL in the window counts.

    Upper bound for any mapping: its retrieval is a subset of this one.
    """
    return recall(index.urls_in_window(window), truth, granularity)


def temporal_sweep(
    index: TemporalTagIndex,
    mappings: Mapping[str, TagMapping],
    truths: Sequence[GroundTruth],
    anchor: TimeWindow,
    max_past: int,
    max_future: int,
    granularity: str = "host",
) -> list[list[SweepCell]]:
    """Average recall per (past, future) window extension of `anchor`.

    Cell (p, f) evaluates every truth on the anchor window stretched p
    months into the past and f into the future. Row-major: result[p][f].
    Widening the window can only add retrieved URLs, so values are
    non-decreasing along both axes.
    """
    if max_past < 0 or max_future < 0:
        raise ValueError("sweep extents must be non-negative")
    evaluable = [t for t in truths if t.clicked and t.query in mappings]
    if not evaluable:
        raise ValueError("no evaluable queries for sweep")
    matrix = []
    for p in range(max_past + 1):
        row = []
        for f in range(max_future + 1):
            window = anchor.extended(p, f)
            recalls = [
                evaluate_query(index, mappings[t.query], t, window, granularity).recall_exact
                for t in evaluable
            ]
            avg = _average(recalls)
            row.append(SweepCell(past_months=p, future_months=f, average_recall=float(avg)))
        matrix.append(row)
    return matrix


def _fmt(value: float | None) -> str:
    return "" if value is None else repr(value)


def write_per_query_csv(report: RecallReport, out: IO[str]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["query", "recall", "retrieved_count", "query_count"])
    for q in report.per_query:
        writer.writerow([q.query, _fmt(q.recall), q.retrieved_count, q.query_count])


def write_buckets_csv(report: RecallReport, out: IO[str]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["bucket", "num_queries", "avg_recall"])
    for row in report.buckets:
        writer.writerow([row.label, row.num_queries, _fmt(row.avg_recall)])


def write_top_x_csv(report: RecallReport, out: IO[str]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["x", "avg_recall"])
    for x, value in report.top_x_curve:
        writer.writerow([x, _fmt(value)])


def write_sweep_csv(matrix: Sequence[Sequence[SweepCell]], out: IO[str]) -> None:
    """Matrix CSV: one row per past extent, one column per future extent."""
    writer = csv.writer(out, lineterminator="\n")
    futures = [cell.future_months for cell in matrix[0]]
    writer.writerow(["past\\future"] + [str(f) for f in futures])
    for row in matrix:
        writer.writerow([row[0].past_months] + [_fmt(cell.average_recall) for cell in row])


def write_report_files(
    report: RecallReport, directory: str | Path, prefix: str = "recall"
) -> list[Path]:
    """Write the three report CSVs into `directory`; returns the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, writer in (
        ("per_query", write_per_query_csv),
        ("buckets", write_buckets_csv),
        ("top_x", write_top_x_csv),
    ):
        path = directory / f"{prefix}_{name}.csv"
        with open(path, "w", encoding="utf-8", newline="") as handle:
            writer(report, handle)
        paths.append(path)
    return paths
