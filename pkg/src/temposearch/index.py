"""Immutable temporal inverted index over bookmarks.

Postings are (month, url, user) triples per tag, sorted by month, so
windowed retrieval is two bisects and a slice. Multi-tag post counting
("all tags together on one post") runs over the de-duplicated bookmark
records themselves, because tag-level postings cannot tell whether two
tags shared a post.

A built index never changes; any number of threads may read it.
"""

from __future__ import annotations

import json
from bisect import bisect_left, bisect_right
from operator import itemgetter
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Bookmark, IngestStats, NormalizedUrl
from .months import TimeWindow, month_index

SNAPSHOT_FORMAT = "temposearch-index"
SNAPSHOT_VERSION = 1


def _record_sort_key(bookmark: Bookmark):
    return (bookmark.month, bookmark.user, bookmark.url.full, sorted(bookmark.tags))


class TemporalTagIndex:
    """Tag -> (month, url, user) postings plus the record table behind them.

    Build through :func:`build_index`; instances are immutable afterwards.
    """

    def __init__(self, records: Iterable[Bookmark]):
        # Canonical order makes windowed slicing a bisect and makes two
        # indexes over the same multiset compare equal.
        self.records: tuple[Bookmark, ...] = tuple(sorted(records, key=_record_sort_key))
        self._record_months: list[int] = [month_index(r.month) for r in self.records]

        postings: dict[str, list[tuple[int, NormalizedUrl, str]]] = {}
        tag_records: dict[str, list[int]] = {}
        url_tags: dict[NormalizedUrl, set[tuple[str, str]]] = {}
        for i, record in enumerate(self.records):
            m_idx = self._record_months[i]
            pairs = url_tags.setdefault(record.url, set())
            for tag in record.tags:
                postings.setdefault(tag, []).append((m_idx, record.url, record.user))
                tag_records.setdefault(tag, []).append(i)
                pairs.add((tag, record.user))

        # Records are month-sorted, so per-tag record indices already are;
        # postings need the explicit sort (and quadruple de-duplication).
        self.postings: dict[str, tuple[tuple[int, NormalizedUrl, str], ...]] = {
            tag: tuple(sorted(set(entries), key=lambda e: (e[0], e[1].full, e[2])))
            for tag, entries in postings.items()
        }
        self.url_tags: dict[NormalizedUrl, frozenset[tuple[str, str]]] = {
            url: frozenset(pairs) for url, pairs in url_tags.items()
        }
        self._tag_records = {tag: tuple(idxs) for tag, idxs in tag_records.items()}

        self.month_bounds: tuple[str, str] | None = None
        if self.records:
            months = [r.month for r in self.records]
            self.month_bounds = (min(months), max(months))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TemporalTagIndex):
            return NotImplemented
        return self.records == other.records

    def __len__(self) -> int:
        return len(self.records)

    def _window_slice(self, months: Sequence[int], window: TimeWindow | None) -> tuple[int, int]:
        if window is None:
            return 0, len(months)
        lo, hi = window.bounds()
        return bisect_left(months, lo), bisect_right(months, hi)

    def urls_for_tags(self, tags: Iterable[str], window: TimeWindow) -> set[NormalizedUrl]:
        """URLs tagged with ANY of `tags` by any user inside `window`."""
        tags = set(tags)
        if not tags:
            raise ValueError("tags must be non-empty")
        lo, hi = window.bounds()
        urls: set[NormalizedUrl] = set()
        for tag in tags:
            entries = self.postings.get(tag)
            if not entries:
                continue
            start = bisect_left(entries, lo, key=itemgetter(0))
            stop = bisect_right(entries, hi, key=itemgetter(0))
            for _, url, _ in entries[start:stop]:
                urls.add(url)
        return urls

    def posts_count(self, tags: Iterable[str], window: TimeWindow | None = None) -> int:
        """Distinct (user, url) pairs posting with ALL of `tags` on one post.

        Counting unique pairs rather than raw records filters spammers who
        repost the same URL. Unwindowed by default (corpus-wide).
        """
        tags = frozenset(tags)
        if not tags:
            raise ValueError("tags must be non-empty")
        candidate_lists = []
        for tag in tags:
            idxs = self._tag_records.get(tag)
            if idxs is None:
                return 0
            candidate_lists.append(idxs)
        rarest = min(candidate_lists, key=len)
        lo, hi = self._window_slice([self._record_months[i] for i in rarest], window)
        pairs: set[tuple[str, str]] = set()
        for i in rarest[lo:hi]:
            record = self.records[i]
            if tags <= record.tags:
                pairs.add((record.user, record.url.full))
        return len(pairs)

    def posts_count_by_month(self, tags: Iterable[str], window: TimeWindow) -> dict[int, int]:
        """posts_count per month over `window`, keyed by month index.

        Only months with a nonzero count appear; callers zero-fill.
        """
        tags = frozenset(tags)
        if not tags:
            raise ValueError("tags must be non-empty")
        candidate_lists = []
        for tag in tags:
            idxs = self._tag_records.get(tag)
            if idxs is None:
                return {}
            candidate_lists.append(idxs)
        rarest = min(candidate_lists, key=len)
        lo, hi = self._window_slice([self._record_months[i] for i in rarest], window)
        by_month: dict[int, set[tuple[str, str]]] = {}
        for i in rarest[lo:hi]:
            record = self.records[i]
            if tags <= record.tags:
                by_month.setdefault(self._record_months[i], set()).add(
                    (record.user, record.url.full)
                )
        return {month: len(pairs) for month, pairs in by_month.items()}

    def candidate_tags_for_urls(
        self, urls: Iterable[NormalizedUrl]
    ) -> tuple[dict[str, int], int]:
        """Per-tag distinct user counts over `urls`, plus the poster count.

        Returns ``(user_count_by_tag, poster_count)`` where poster_count is
        the number of distinct users who posted any of the URLs at all.
        """
        user_count: dict[str, set[str]] = {}
        posters: set[str] = set()
        for url in set(urls):
            for tag, user in self.url_tags.get(url, ()):
                user_count.setdefault(tag, set()).add(user)
                posters.add(user)
        return {tag: len(users) for tag, users in user_count.items()}, len(posters)

    def tag_user_count(self, tag: str) -> int:
        """Distinct users who used `tag` anywhere in the corpus."""
        entries = self.postings.get(tag)
        if not entries:
            return 0
        return len({user for _, _, user in entries})

    def urls_in_window(self, window: TimeWindow) -> set[NormalizedUrl]:
        """Every URL posted inside `window`, regardless of tags."""
        lo, hi = self._window_slice(self._record_months, window)
        return {self.records[i].url for i in range(lo, hi)}

    def records_in_window(self, window: TimeWindow | None) -> Iterable[Bookmark]:
        lo, hi = self._window_slice(self._record_months, window)
        return self.records[lo:hi]


def build_index(bookmarks: Iterable[Bookmark]) -> TemporalTagIndex:
    """Build an index from a bookmark multiset.

    A pure function of the multiset: input order is irrelevant and
    duplicate identical records collapse to one.
    """
    return TemporalTagIndex(set(bookmarks))


def save_index(
    index: TemporalTagIndex, path: str | Path, stats: IngestStats | None = None
) -> None:
    """Write a lossless snapshot: a JSON version header, then one canonical
    record line per bookmark. Ingest stats ride along in the header when
    given, so serving from a snapshot can still report them."""
    header = {
        "format": SNAPSHOT_FORMAT,
        "version": SNAPSHOT_VERSION,
        "records": len(index.records),
    }
    if stats is not None:
        header["stats"] = stats.to_dict()
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(json.dumps(header, sort_keys=True) + "\n")
        for record in index.records:
            handle.write(
                f"{record.month}\t{record.user}\t{record.url.full}\t"
                + ",".join(sorted(record.tags))
                + "\n"
            )


def _url_from_full(full: str) -> NormalizedUrl:
    # Snapshot fields are already canonical; split host/path without
    # re-running normalization.
    slash = full.find("/")
    if slash == -1:
        return NormalizedUrl(host=full, path="", full=full)
    return NormalizedUrl(host=full[:slash], path=full[slash:], full=full)


def load_index(path: str | Path) -> tuple[TemporalTagIndex, dict | None]:
    """Load a snapshot written by :func:`save_index`.

    Returns the index and the header's stats dict (None if absent).
    """
    with open(path, "r", encoding="utf-8") as handle:
        header_line = handle.readline()
        try:
            header = json.loads(header_line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"not an index snapshot: {path}") from exc
        if header.get("format") != SNAPSHOT_FORMAT:
            raise ValueError(f"not an index snapshot: {path}")
        if header.get("version") != SNAPSHOT_VERSION:
            raise ValueError(f"unsupported snapshot version {header.get('version')}")
        records = []
        url_cache: dict[str, NormalizedUrl] = {}
        tagset_cache: dict[str, frozenset[str]] = {}
        for line in handle:
            month, user, full, raw_tags = line.rstrip("\n").split("\t")
            url = url_cache.get(full)
            if url is None:
                url = url_cache[full] = _url_from_full(full)
            tags = tagset_cache.get(raw_tags)
            if tags is None:
                tags = tagset_cache[raw_tags] = frozenset(raw_tags.split(","))
            records.append(Bookmark(user=user, url=url, month=month, tags=tags))
    expected = header.get("records")
    if expected is not None and expected != len(records):
        raise ValueError(f"snapshot truncated: expected {expected} records, read {len(records)}")
    return TemporalTagIndex(records), header.get("stats")
