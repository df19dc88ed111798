"""How recall grows as the search window stretches around the log's span.

Clicked URLs are often bookmarked months before or after the search
happened, so widening the window recovers them. The sweep evaluates every
(past, future) extension pair and prints the resulting recall matrix;
values can only go up along both axes.

    python3 demos/temporal_sweep.py
"""

import tempfile
from pathlib import Path

from temposearch import (
    TimeWindow,
    build_index,
    build_mapping_corpus,
    extract_ground_truth,
    load_corpus,
    load_query_log,
    load_seed_file,
    temporal_sweep,
)
from temposearch.fixtures import write_fixture_tree

workdir = Path(tempfile.mkdtemp(prefix="temposearch-sweep-"))
tree = write_fixture_tree(workdir)

bookmarks, _ = load_corpus(tree["bookmarks"])
index = build_index(bookmarks)
mappings = build_mapping_corpus(index, load_seed_file(tree["seeds"])).map_all()
records, _ = load_query_log(tree["msn_log"])

# The log sits entirely in 2006-05; that month anchors the sweep.
anchor = TimeWindow("2006-05", "2006-05")
truths = [
    truth
    for query in sorted(mappings)
    if (truth := extract_ground_truth(records, query)) is not None
]
print(f"anchor window {anchor.start}..{anchor.end}, {len(truths)} evaluable queries\n")

matrix = temporal_sweep(index, mappings, truths, anchor, max_past=6, max_future=6)

header = "past\\future " + " ".join(f"+{f}mo" for f in range(7))
print(header)
for row in matrix:
    cells = " ".join(f"{cell.average_recall:.2f}" for cell in row)
    print(f"       -{row[0].past_months}mo  {cells}")

# Where the jumps come from: sudoku's clicked hosts were bookmarked in
# 2006-02 (sudoku.com) and 2006-07 (websudoku.com), outside the anchor.
truth = next(t for t in truths if t.query == "Sudoku")
for past, future in ((0, 0), (0, 2), (3, 2)):
    window = anchor.extended(past, future)
    hit = {
        url.host
        for url in index.urls_for_tags(mappings["Sudoku"].tags, window)
    } & {u.host for u in truth.clicked}
    print(
        f"\nSudoku with window {window.start}..{window.end}: "
        f"recovered {sorted(hit) or 'nothing'}"
    )
