"""Windowed retrieval over the temporal index.

Result sets use ANY-tag semantics (a URL matches if any accepted tag was
attached to it inside the window). Ranking is deliberately simple: posting
frequency with a lexicographic tie-break, enough for stable, plausible
lists. Precision-oriented ranking is out of scope.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from operator import itemgetter
from typing import Iterable

from .corpus import NormalizedUrl
from .index import TemporalTagIndex
from .mapping import TagMapping
from .months import TimeWindow, month_str


@dataclass(frozen=True, slots=True)
class SearchResult:
    """One matched URL with display evidence from the supporting posts."""

    url: NormalizedUrl
    post_count: int
    matched_tags: frozenset[str]
    first_month: str
    last_month: str

    def to_dict(self) -> dict:
        return {
            "url": self.url.full,
            "host": self.url.host,
            "postCount": self.post_count,
            "matchedTags": sorted(self.matched_tags),
            "firstMonth": self.first_month,
            "lastMonth": self.last_month,
        }


@dataclass(frozen=True, slots=True)
class SearchResponse:
    query: str
    window: TimeWindow
    tags: frozenset[str]
    results: tuple[SearchResult, ...]
    total_urls: int

    def to_dict(self) -> dict:
        return {
            "query": self.query,
            "from": self.window.start,
            "to": self.window.end,
            "tags": sorted(self.tags),
            "results": [r.to_dict() for r in self.results],
            "totalUrls": self.total_urls,
        }


def search_tags(
    index: TemporalTagIndex,
    tags: Iterable[str],
    window: TimeWindow,
    limit: int | None = None,
    query: str = "",
) -> SearchResponse:
    """Retrieve URLs carrying ANY of `tags` inside `window`.

    Per URL, post_count is the number of distinct (user, month) pairs among
    the posts that attached a matching tag to it; repeat posts by one user
    in one month count once. Ordered by post_count descending, then URL
    ascending. `limit` truncates the list; total_urls stays untruncated.
    """
    tags = frozenset(tags)
    if not tags:
        raise ValueError("tags must be non-empty")
    if limit is not None and limit < 0:
        raise ValueError("limit must be non-negative")
    lo, hi = window.bounds()

    support: dict[NormalizedUrl, set[tuple[str, int]]] = {}
    matched: dict[NormalizedUrl, set[str]] = {}
    months: dict[NormalizedUrl, tuple[int, int]] = {}
    for tag in sorted(tags):
        entries = index.postings.get(tag)
        if not entries:
            continue
        start = bisect_left(entries, lo, key=itemgetter(0))
        stop = bisect_right(entries, hi, key=itemgetter(0))
        for m_idx, url, user in entries[start:stop]:
            support.setdefault(url, set()).add((user, m_idx))
            matched.setdefault(url, set()).add(tag)
            span = months.get(url)
            if span is None:
                months[url] = (m_idx, m_idx)
            else:
                months[url] = (min(span[0], m_idx), max(span[1], m_idx))

    results = [
        SearchResult(
            url=url,
            post_count=len(pairs),
            matched_tags=frozenset(matched[url]),
            first_month=month_str(months[url][0]),
            last_month=month_str(months[url][1]),
        )
        for url, pairs in support.items()
    ]
    results.sort(key=lambda r: (-r.post_count, r.url.full))
    total = len(results)
    if limit is not None:
        results = results[:limit]
    return SearchResponse(
        query=query,
        window=window,
        tags=tags,
        results=tuple(results),
        total_urls=total,
    )


def search(
    index: TemporalTagIndex,
    mapping: TagMapping,
    window: TimeWindow,
    limit: int | None = None,
) -> SearchResponse:
    """Retrieve with a query's accepted tags; see :func:`search_tags`."""
    if not mapping.tags:
        raise ValueError(f"mapping for {mapping.query!r} has no accepted tags")
    return search_tags(index, mapping.tags, window, limit, query=mapping.query)


def monthly_histogram(
    index: TemporalTagIndex, tags: Iterable[str], span: TimeWindow
) -> list[tuple[str, int]]:
    """Per month in `span`: distinct (user, url) posts carrying ALL of `tags`.

    Zero-filled, one entry per month. Equivalent to posts_count restricted
    to each single month, computed in one pass.
    """
    counts = index.posts_count_by_month(tags, span)
    lo, hi = span.bounds()
    return [(month_str(m), counts.get(m, 0)) for m in range(lo, hi + 1)]
