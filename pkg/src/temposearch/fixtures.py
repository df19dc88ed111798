"""Built-in fixture data: a small worked-example corpus plus a bulk
synthetic generator.

The worked example is engineered so the whole pipeline has hand-checkable
results: five queries over 2006 bookmark data with two click logs, one
log anchored to a single month and one to a three-month span. The shapes
below are load-bearing for tests; change counts only with the arithmetic
in mind (candidate filters need >= 10 users, scores sit on exact
fractions around the 0.7 threshold).

Expected mappings (threshold 0.7, defaults):
  American Apparel -> americanapparel, apparel, tshirts  (shopping 25/36)
  Wikipedia        -> wikipedia, wiki, encyclopedia      (reference 0.6875)
  Gmail            -> gmail, email
  ESPN             -> espn, sports
  Sudoku           -> sudoku, games, shopping

Expected recall, window = log span, host granularity:
  MSN (2006-05):       american apparel 1.0, wikipedia 1.0, gmail 1.0,
                       espn 0.5, sudoku 0.0   -> average 0.7
  AOL (2006-03..05):   american apparel 0.5, wikipedia 1.0, gmail 1.0,
                       sudoku 0.0             -> average 0.625
"""

from __future__ import annotations

import random
from pathlib import Path
from typing import Iterator

def _ts(month: str, salt: int = 0) -> str:
    day = 3 + (salt * 7) % 25
    hour = (salt * 5) % 24
    return f"{month}-{day:02d}T{hour:02d}:14:00Z"


def _post(month: str, user: str, url: str, tags: str, salt: int = 0) -> str:
    return f"{_ts(month, salt)}\t{user}\t{url}\t{tags}"


def _block(users: list[str], month: str, url: str, tags: str) -> list[str]:
    return [_post(month, user, url, tags, i) for i, user in enumerate(users)]


def _users(prefix: str, start: int, stop: int) -> list[str]:
    return [f"{prefix}{i:02d}" for i in range(start, stop + 1)]


def fixture_bookmark_lines() -> list[str]:
    """The worked-example corpus, 220 posts across 2006."""
    lines: list[str] = []

    aa = "americanapparel.net"
    store = "americanapparelstore.com"
    # Spellings vary on purpose; they must all normalize to the same URL.
    lines += _block(_users("u", 1, 6), "2006-04", f"http://www.{aa}/", "americanapparel")
    lines += _block(_users("u", 7, 12), "2006-05", aa, "americanapparel")
    lines += _block(_users("u", 13, 18), "2006-04", aa, "apparel")
    lines += _block(_users("u", 19, 24), "2006-05", f"https://{aa}", "apparel")
    lines += _block(_users("u", 25, 30), "2006-03", aa, "t-shirts")
    lines += _block(_users("u", 31, 36), "2006-05", aa, "T-Shirts")
    lines += _block(_users("u", 37, 42), "2006-03", aa, "shopping")
    lines += _block(_users("u", 43, 48), "2006-06", aa, "shopping")
    lines += [
        _post("2006-05", "u49", aa, "americanapparel,apparel"),
        _post("2006-05", "u50", aa, "americanapparel,t-shirts"),
        _post("2006-04", "u51", aa, "americanapparel,shopping"),
        _post("2006-06", "u52", aa, "americanapparel,shopping"),
    ]
    # Nine users only: stays below the candidate filter's user minimum.
    lines += _block(_users("u", 13, 21), "2006-02", aa, "fashion")
    lines += [
        _post("2006-05", "u01", f"http://{store}/", "americanapparel"),
        _post("2006-04", "u02", store, "americanapparel"),
    ]

    wp = "wikipedia.org"
    lines += _block(_users("w", 1, 6), "2006-04", wp, "wikipedia")
    lines += _block(_users("w", 7, 12), "2006-05", f"http://www.{wp}/", "wikipedia")
    lines += _block(_users("w", 13, 18), "2006-05", wp, "wiki")
    lines += _block(_users("w", 19, 24), "2006-06", wp, "wiki")
    lines += _block(_users("w", 25, 30), "2006-03", wp, "encyclopedia")
    lines += _block(_users("w", 31, 36), "2006-05", wp, "Encyclopedia")
    lines += _block(_users("w", 37, 48), "2006-04", wp, "reference")
    lines += [_post("2006-05", "w49", wp, "wikipedia,wiki")]
    # 20 of 32 reference posts co-occur with the reference tag: exclusiveness
    # lands at 0.375 and the score at 0.6875, just under the threshold.
    lines += _block(_users("w", 50, 69), "2006-05", wp, "wikipedia,reference")

    gm = "gmail.com"
    lines += _block(_users("g", 1, 6), "2006-03", gm, "gmail")
    lines += _block(_users("g", 7, 12), "2006-05", gm, "gmail")
    lines += _block(_users("g", 13, 18), "2006-04", gm, "email")
    lines += _block(_users("g", 19, 24), "2006-06", gm, "email")
    lines += [_post("2006-05", "g25", gm, "gmail,email")]

    es = "espn.com"
    lines += _block(_users("e", 1, 6), "2006-02", es, "espn")
    lines += _block(_users("e", 7, 12), "2006-05", es, "espn")
    lines += _block(_users("e", 13, 18), "2006-04", es, "sports")
    lines += _block(_users("e", 19, 24), "2006-05", es, "sports")
    lines += [_post("2006-05", "e25", es, "espn,sports")]
    # Reachable only without tags: its sole tag is never accepted.
    lines += _block(_users("x", 1, 3), "2006-05", "espn.go.com", "news")

    ws = "websudoku.com"
    lines += _block(_users("s", 1, 12), "2006-07", ws, "sudoku")
    lines += _block(_users("s", 13, 24), "2006-07", ws, "games")
    lines += _block(_users("s", 25, 36), "2006-07", ws, "shopping")
    lines += [_post("2006-07", "s37", ws, "sudoku,games")]
    lines += _block(_users("t", 1, 3), "2006-02", "sudoku.com", "sudoku")

    lines += [
        _post("2006-01", "n01", "randomsite1.example", "news"),
        _post("2006-08", "n02", "randomsite2.example", "news"),
        _post("2006-09", "n03", "randomsite3.example", "news,blog"),
        _post("2006-10", "n04", "randomsite4.example", "blog"),
        _post("2006-12", "n05", "randomsite5.example", "misc"),
    ]
    return lines


def fixture_seed_lines() -> list[str]:
    return [
        "American Apparel\tamericanapparel.net,americanapparelstore.com,notindexed.example/shop",
        "Wikipedia\thttp://www.wikipedia.org/",
        "Gmail\tgmail.com",
        "ESPN\tespn.com",
        "Sudoku\twebsudoku.com",
    ]


def _log_line(month: str, session: str, query: str, url: str, salt: int = 0) -> str:
    return f"{_ts(month, salt)}\t{session}\t{query}\t{url}"


def msn_fixture_log_lines() -> list[str]:
    """Single-month log (2006-05). 1555 records, five evaluable queries."""
    lines: list[str] = []
    n = 0

    def add(query: str, url: str, repeat: int) -> None:
        nonlocal n
        for _ in range(repeat):
            lines.append(_log_line("2006-05", f"msn{n:05d}", query, url, n))
            n += 1

    add("american apparel", "http://www.americanapparel.net/", 3)
    add("american apparel", "americanapparelstore.com", 2)
    add("wikipedia", "wikipedia.org", 25)
    add("wikipedia", "http://www.wikipedia.org/", 15)
    add("gmail", "gmail.com", 300)
    add("espn", "espn.com", 600)
    add("espn", "espn.go.com", 600)
    add("sudoku", "websudoku.com", 5)
    add("sudoku", "sudoku.com", 3)
    add("myspace", "myspace.com", 2)
    return lines


def aol_fixture_log_lines() -> list[str]:
    """Three-month log (2006-03 .. 2006-05). 51 records."""
    lines: list[str] = []
    n = 0

    def add(month: str, query: str, url: str, repeat: int = 1) -> None:
        nonlocal n
        for _ in range(repeat):
            lines.append(_log_line(month, f"aol{n:04d}", query, url, n))
            n += 1

    add("2006-03", "american apparel", "americanapparel.net")
    add("2006-04", "american apparel", "americanapparelstore.com")
    add("2006-04", "american apparel", "allonlinecoupons.com")
    add("2006-05", "american apparel", "usawear.org")
    add("2006-03", "wikipedia", "wikipedia.org", 5)
    add("2006-04", "wikipedia", "wikipedia.org", 5)
    add("2006-05", "wikipedia", "wikipedia.org", 5)
    add("2006-04", "gmail", "gmail.com", 30)
    add("2006-03", "sudoku", "websudoku.com")
    add("2006-05", "sudoku", "websudoku.com")
    return lines


def write_fixture_tree(directory: str | Path) -> dict[str, Path]:
    """Write the worked example as the four external files; returns paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    files = {
        "bookmarks": (directory / "bookmarks.tsv", fixture_bookmark_lines()),
        "seeds": (directory / "seeds.tsv", fixture_seed_lines()),
        "msn_log": (directory / "msn_log.tsv", msn_fixture_log_lines()),
        "aol_log": (directory / "aol_log.tsv", aol_fixture_log_lines()),
    }
    out = {}
    for key, (path, lines) in files.items():
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        out[key] = path
    return out


def synthetic_bookmark_lines(count: int, seed: int = 7) -> Iterator[str]:
    """Bulk corpus lines for scale and robustness tests.

    Draws from fixed pools (50k URLs, 20k users, 2k tags, 48 months) so
    repeated raw strings keep the ingest caches effective, mirroring the
    heavy skew of real bookmark data.
    """
    rng = random.Random(seed)
    hosts = [f"site{i}.example" for i in range(5_000)]
    urls = [
        f"{rng.choice(hosts)}/page{i % 17}" if i % 3 else rng.choice(hosts)
        for i in range(50_000)
    ]
    users = [f"user{i}" for i in range(20_000)]
    tags = [f"tag{i}" for i in range(2_000)]
    tagsets = [
        ",".join(rng.sample(tags, rng.choice((1, 1, 2, 2, 3, 4))))
        for _ in range(30_000)
    ]
    months = [f"{2004 + i // 12}-{i % 12 + 1:02d}" for i in range(48)]
    stamps = [f"{m}-{rng.randrange(1, 29):02d}T{rng.randrange(24):02d}:30:00Z" for m in months]
    for _ in range(count):
        stamp = rng.choice(stamps)
        user = rng.choice(users)
        url = rng.choice(urls)
        tagset = rng.choice(tagsets)
        yield f"{stamp}\t{user}\t{url}\t{tagset}"
