"""Bookmark-corpus ingestion: parsing, normalization, and de-duplication.

Input files are UTF-8 text, one record per line:

* bookmark file:  ``timestamp<TAB>user<TAB>url<TAB>tag1,tag2,...``
* query log file: ``timestamp<TAB>session<TAB>query<TAB>clicked_url``
* seed file:      ``query<TAB>url1,url2,...`` (ordered proxy results)

Timestamps are ISO-8601 and reduced to a UTC calendar month on ingest;
nothing finer than a month survives parsing. Malformed lines never abort
ingestion: they are rejected with a reason code and counted.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator
from urllib.parse import unquote, urlsplit

from .months import month_of_timestamp

MAX_SEEDS = 100

# Line-rejection reason codes.
REJECT_FIELD_COUNT = "field_count"
REJECT_BAD_TIMESTAMP = "bad_timestamp"
REJECT_BAD_URL = "bad_url"
REJECT_NO_TAGS = "no_tags"
REJECT_EMPTY_QUERY = "empty_query"

_TAG_STRIP_RE = re.compile(r"[^a-z0-9]+")


class CorpusError(Exception):
    """Base error for corpus parsing."""


class UrlError(CorpusError):
    """Raw URL could not be normalized."""


class LineReject(CorpusError):
    """A single input line was rejected; ingestion continues."""

    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason


@dataclass(frozen=True, slots=True)
class NormalizedUrl:
    """Canonical URL: lowercase host without "www.", decoded path, no
    scheme/port/query/fragment/trailing slash. ``full == host + path``."""

    host: str
    path: str
    full: str


@dataclass(frozen=True, slots=True)
class Bookmark:
    """One user's timestamped, tagged posting of a URL."""

    user: str
    url: NormalizedUrl
    month: str
    tags: frozenset[str]


@dataclass(frozen=True, slots=True)
class QueryLogRecord:
    month: str
    session: str
    query: str
    clicked: NormalizedUrl


@dataclass(frozen=True, slots=True)
class SeedSet:
    """A query and its ordered proxy search results (deduplicated, at most
    :data:`MAX_SEEDS`)."""

    query: str
    seeds: tuple[NormalizedUrl, ...]


def normalize_url(raw: str) -> NormalizedUrl:
    """Normalize a raw URL for cross-source matching.

    Strips scheme, port, query string, and fragment; lowercases the host
    and removes one leading "www."; percent-decodes the path and drops
    trailing slashes. Idempotent: re-normalizing ``full`` is a no-op.
    """
    raw = raw.strip()
    if not raw:
        raise UrlError("empty URL")
    if "://" in raw:
        raw = raw.split("://", 1)[1]
    if raw.startswith("//"):
        raw = raw[2:]
    try:
        parts = urlsplit("//" + raw)
        host = parts.hostname or ""
    except ValueError as exc:
        raise UrlError(str(exc)) from exc
    host = host.strip().rstrip(".")
    if host.startswith("www."):
        host = host[4:]
    if not host or any(ch.isspace() for ch in host):
        raise UrlError(f"no usable host in {raw!r}")
    path = unquote(parts.path).rstrip("/")
    return NormalizedUrl(host=host, path=path, full=host + path)


def host_only(url: NormalizedUrl) -> NormalizedUrl:
    """Collapse a URL to its host (the coarse matching granularity)."""
    if not url.path:
        return url
    return NormalizedUrl(host=url.host, path="", full=url.host)


def normalize_tag(raw: str) -> str:
    """Lowercase a tag and strip everything outside [a-z0-9].

    An empty result means "drop this tag".
    """
    return _TAG_STRIP_RE.sub("", raw.lower())


def _normalize_tags(raw_tags: str) -> frozenset[str]:
    tags = {normalize_tag(t) for t in raw_tags.split(",")}
    tags.discard("")
    return frozenset(tags)


def parse_bookmark_line(line: str) -> Bookmark:
    """Parse one bookmark line; raises :class:`LineReject` on bad input."""
    fields = line.rstrip("\n").split("\t")
    if len(fields) != 4:
        raise LineReject(REJECT_FIELD_COUNT, f"expected 4 fields, got {len(fields)}")
    timestamp, user, raw_url, raw_tags = fields
    try:
        month = month_of_timestamp(timestamp)
    except ValueError as exc:
        raise LineReject(REJECT_BAD_TIMESTAMP, timestamp) from exc
    try:
        url = normalize_url(raw_url)
    except UrlError as exc:
        raise LineReject(REJECT_BAD_URL, raw_url) from exc
    tags = _normalize_tags(raw_tags)
    if not tags:
        raise LineReject(REJECT_NO_TAGS, raw_tags)
    return Bookmark(user=user, url=url, month=month, tags=tags)


def serialize_bookmark(bookmark: Bookmark) -> str:
    """Render a bookmark back to its line format (month-granular timestamp).

    ``parse_bookmark_line(serialize_bookmark(b)) == b`` for any bookmark
    produced by this module.
    """
    return "\t".join(
        (
            f"{bookmark.month}-01T00:00:00Z",
            bookmark.user,
            bookmark.url.full,
            ",".join(sorted(bookmark.tags)),
        )
    )


def parse_query_log_line(line: str) -> QueryLogRecord:
    fields = line.rstrip("\n").split("\t")
    if len(fields) != 4:
        raise LineReject(REJECT_FIELD_COUNT, f"expected 4 fields, got {len(fields)}")
    timestamp, session, query, raw_url = fields
    try:
        month = month_of_timestamp(timestamp)
    except ValueError as exc:
        raise LineReject(REJECT_BAD_TIMESTAMP, timestamp) from exc
    if not query.strip():
        raise LineReject(REJECT_EMPTY_QUERY)
    try:
        clicked = normalize_url(raw_url)
    except UrlError as exc:
        raise LineReject(REJECT_BAD_URL, raw_url) from exc
    return QueryLogRecord(month=month, session=session, query=query, clicked=clicked)


def parse_seed_line(line: str) -> SeedSet:
    fields = line.rstrip("\n").split("\t")
    if len(fields) != 2:
        raise LineReject(REJECT_FIELD_COUNT, f"expected 2 fields, got {len(fields)}")
    query, raw_urls = fields
    if not query.strip():
        raise LineReject(REJECT_EMPTY_QUERY)
    seeds: list[NormalizedUrl] = []
    seen: set[NormalizedUrl] = set()
    for raw in raw_urls.split(","):
        raw = raw.strip()
        if not raw:
            continue
        try:
            url = normalize_url(raw)
        except UrlError:
            continue
        if url not in seen:
            seen.add(url)
            seeds.append(url)
        if len(seeds) == MAX_SEEDS:
            break
    return SeedSet(query=query, seeds=tuple(seeds))


@dataclass
class IngestStats:
    """Counts of what ingestion saw, mergeable across input chunks.

    Merging is associative and commutative, so disjoint chunks may be
    parsed concurrently and combined in any order.
    """

    bookmarks: int = 0
    rejects: Counter = field(default_factory=Counter)
    _urls: set[NormalizedUrl] = field(default_factory=set)
    _tags: set[str] = field(default_factory=set)
    _users: set[str] = field(default_factory=set)

    def add(self, bookmark: Bookmark) -> None:
        self.bookmarks += 1
        self._urls.add(bookmark.url)
        self._tags.update(bookmark.tags)
        self._users.add(bookmark.user)

    def add_reject(self, reason: str) -> None:
        self.rejects[reason] += 1

    def merge(self, other: "IngestStats") -> "IngestStats":
        merged = IngestStats(
            bookmarks=self.bookmarks + other.bookmarks,
            rejects=self.rejects + other.rejects,
        )
        merged._urls = self._urls | other._urls
        merged._tags = self._tags | other._tags
        merged._users = self._users | other._users
        return merged

    @property
    def unique_urls(self) -> int:
        return len(self._urls)

    @property
    def unique_tags(self) -> int:
        return len(self._tags)

    @property
    def unique_users(self) -> int:
        return len(self._users)

    @property
    def rejected_lines(self) -> int:
        return sum(self.rejects.values())

    def to_dict(self) -> dict:
        return {
            "bookmarks": self.bookmarks,
            "unique_urls": self.unique_urls,
            "unique_tags": self.unique_tags,
            "unique_users": self.unique_users,
            "rejected_lines": self.rejected_lines,
            "rejects_by_reason": dict(sorted(self.rejects.items())),
        }


def parse_bookmark_lines(lines: Iterable[str]) -> tuple[list[Bookmark], IngestStats]:
    """Parse a chunk of bookmark lines, counting rejects.

    Stateless per line apart from memoization caches, so disjoint chunks
    parse independently; merge the stats afterwards. Blank lines are
    skipped without counting.
    """
    stats = IngestStats()
    bookmarks: list[Bookmark] = []
    # Raw URLs, tag strings, and tag sets repeat heavily in real dumps;
    # memoizing them keeps large ingests fast and memory-shared.
    url_cache: dict[str, NormalizedUrl] = {}
    tagset_cache: dict[str, frozenset[str]] = {}
    for line in lines:
        if not line.strip():
            continue
        fields = line.rstrip("\n").split("\t")
        if len(fields) != 4:
            stats.add_reject(REJECT_FIELD_COUNT)
            continue
        timestamp, user, raw_url, raw_tags = fields
        try:
            month = month_of_timestamp(timestamp)
        except ValueError:
            stats.add_reject(REJECT_BAD_TIMESTAMP)
            continue
        url = url_cache.get(raw_url)
        if url is None:
            try:
                url = normalize_url(raw_url)
            except UrlError:
                stats.add_reject(REJECT_BAD_URL)
                continue
            url_cache[raw_url] = url
        tags = tagset_cache.get(raw_tags)
        if tags is None:
            tags = _normalize_tags(raw_tags)
            tagset_cache[raw_tags] = tags
        if not tags:
            stats.add_reject(REJECT_NO_TAGS)
            continue
        bookmark = Bookmark(user=user, url=url, month=month, tags=tags)
        bookmarks.append(bookmark)
        stats.add(bookmark)
    return bookmarks, stats


def load_corpus(path: str | Path) -> tuple[list[Bookmark], IngestStats]:
    """Stream-parse a bookmark file. Unreadable file is fatal."""
    with open(path, "r", encoding="utf-8") as handle:
        return parse_bookmark_lines(handle)


def load_query_log(path: str | Path) -> tuple[list[QueryLogRecord], Counter]:
    """Parse a query log file; returns (records, reject counts by reason)."""
    records: list[QueryLogRecord] = []
    rejects: Counter = Counter()
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            try:
                records.append(parse_query_log_line(line))
            except LineReject as reject:
                rejects[reject.reason] += 1
    return records, rejects


def load_seed_file(path: str | Path) -> list[SeedSet]:
    """Parse a seed file; rejected lines are dropped silently."""
    seed_sets: list[SeedSet] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            try:
                seed_sets.append(parse_seed_line(line))
            except LineReject:
                continue
    return seed_sets


def iter_chunks(lines: Iterable[str], size: int) -> Iterator[list[str]]:
    """Split a line stream into chunks for concurrent parsing."""
    chunk: list[str] = []
    for line in lines:
        chunk.append(line)
        if len(chunk) >= size:
            yield chunk
            chunk = []
    if chunk:
        yield chunk
