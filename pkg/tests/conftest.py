"""Shared fixtures: the worked example parsed once, plus random generators.

Random corpora are seeded per test so failures replay; tags and hosts come
from small pools to force the co-occurrence and multi-user structure the
formulas care about.
"""

from __future__ import annotations

import random

import pytest

from temposearch.corpus import (
    Bookmark,
    QueryLogRecord,
    SeedSet,
    load_corpus,
    load_query_log,
    load_seed_file,
    normalize_url,
)
from temposearch.fixtures import write_fixture_tree
from temposearch.index import build_index

TAG_POOL = [
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta",
    "news", "blog", "tools", "music", "video", "shop", "games", "maps",
]
MONTH_POOL = [f"{year}-{month:02d}" for year in (2004, 2005, 2006) for month in range(1, 13)]


def random_bookmarks(rng: random.Random, max_count: int = 500) -> list[Bookmark]:
    hosts = [f"host{i}.example" for i in range(rng.randint(2, 12))]
    users = [f"user{i}" for i in range(rng.randint(2, 40))]
    count = rng.randint(1, max_count)
    bookmarks = []
    for _ in range(count):
        host = rng.choice(hosts)
        path = rng.choice(["", "", "/a", "/b/c"])
        tags = frozenset(rng.sample(TAG_POOL, rng.randint(1, 4)))
        bookmarks.append(
            Bookmark(
                user=rng.choice(users),
                url=normalize_url(host + path),
                month=rng.choice(MONTH_POOL),
                tags=tags,
            )
        )
    return bookmarks


def random_seed_sets(rng: random.Random, bookmarks: list[Bookmark]) -> list[SeedSet]:
    urls = sorted({b.url for b in bookmarks}, key=lambda u: u.full)
    count = rng.randint(2, 6)
    seed_sets = []
    for i in range(count):
        picked = rng.sample(urls, rng.randint(1, min(3, len(urls))))
        seed_sets.append(SeedSet(query=f"query {TAG_POOL[i]}", seeds=tuple(picked)))
    return seed_sets


def random_log(rng: random.Random, queries: list[str], months: list[str]) -> list[QueryLogRecord]:
    records = []
    for i in range(rng.randint(5, 60)):
        query = rng.choice(queries + ["unmatched noise"])
        host = f"host{rng.randint(0, 11)}.example"
        records.append(
            QueryLogRecord(
                month=rng.choice(months),
                session=f"s{i}",
                query=query if rng.random() < 0.7 else query.upper(),
                clicked=normalize_url(host + rng.choice(["", "/a"])),
            )
        )
    return records


@pytest.fixture(scope="session")
def fixture_tree(tmp_path_factory):
    return write_fixture_tree(tmp_path_factory.mktemp("fixture"))


@pytest.fixture(scope="session")
def fixture_corpus(fixture_tree):
    return load_corpus(fixture_tree["bookmarks"])


@pytest.fixture(scope="session")
def fixture_index(fixture_corpus):
    bookmarks, _ = fixture_corpus
    return build_index(bookmarks)


@pytest.fixture(scope="session")
def fixture_seed_sets(fixture_tree):
    return load_seed_file(fixture_tree["seeds"])


@pytest.fixture(scope="session")
def msn_records(fixture_tree):
    records, _ = load_query_log(fixture_tree["msn_log"])
    return records


@pytest.fixture(scope="session")
def aol_records(fixture_tree):
    records, _ = load_query_log(fixture_tree["aol_log"])
    return records


@pytest.fixture(scope="session")
def fixture_mappings(fixture_index, fixture_seed_sets):
    from temposearch.mapping import build_mapping_corpus

    return build_mapping_corpus(fixture_index, fixture_seed_sets).map_all()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of every run."""
    rows = []
    for status, verdict in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            if getattr(report, "when", "call") != "call" and verdict == "PASS":
                continue
            name = nodeid.split("::")[-1].removeprefix("test_")
            rows.append((name, verdict))
    if not rows:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, verdict in sorted(set(rows)):
        number, _, label = name.partition("_")
        terminalreporter.write_line(
            f"criterion {number.removeprefix('c')} ({label.replace('_', ' ')}): {verdict}"
        )
