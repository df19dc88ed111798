"""Temporal tag search over social-bookmark corpora.

Pipeline: ingest timestamped bookmarks, build an immutable month-granular
tag index, map free-text queries onto tags via seed URLs, retrieve URLs
inside time windows, and measure recall against search-engine click logs.
"""

from .corpus import (
    Bookmark,
    CorpusError,
    IngestStats,
    LineReject,
    NormalizedUrl,
    QueryLogRecord,
    SeedSet,
    UrlError,
    host_only,
    load_corpus,
    load_query_log,
    load_seed_file,
    normalize_tag,
    normalize_url,
    parse_bookmark_line,
    serialize_bookmark,
)
from .evaluation import (
    GroundTruth,
    QueryRecall,
    RecallReport,
    SweepCell,
    evaluate_all,
    evaluate_query,
    extract_ground_truth,
    popularity_buckets,
    recall,
    temporal_sweep,
    top_x_curve,
    unmapped_recall,
)
from .index import TemporalTagIndex, build_index, load_index, save_index
from .mapping import (
    MappingCorpus,
    MappingError,
    ScoredTag,
    TagMapping,
    accepted_tags,
    build_mapping_corpus,
    load_mappings,
    reference_tag_for,
    save_mappings,
)
from .months import TimeWindow, add_months, month_index, month_of_timestamp, month_str
from .search import SearchResponse, SearchResult, monthly_histogram, search, search_tags
from .service import SearchService, make_server, start_in_thread

__version__ = "1.0.0"

__all__ = [
    "Bookmark",
    "CorpusError",
    "GroundTruth",
    "IngestStats",
    "LineReject",
    "MappingCorpus",
    "MappingError",
    "NormalizedUrl",
    "QueryLogRecord",
    "QueryRecall",
    "RecallReport",
    "ScoredTag",
    "SearchResponse",
    "SearchResult",
    "SearchService",
    "SeedSet",
    "SweepCell",
    "TagMapping",
    "TemporalTagIndex",
    "TimeWindow",
    "UrlError",
    "add_months",
    "build_index",
    "build_mapping_corpus",
    "evaluate_all",
    "evaluate_query",
    "extract_ground_truth",
    "host_only",
    "load_corpus",
    "load_index",
    "load_mappings",
    "load_query_log",
    "load_seed_file",
    "make_server",
    "month_index",
    "month_of_timestamp",
    "month_str",
    "monthly_histogram",
    "normalize_tag",
    "normalize_url",
    "parse_bookmark_line",
    "popularity_buckets",
    "recall",
    "accepted_tags",
    "reference_tag_for",
    "save_index",
    "save_mappings",
    "search",
    "search_tags",
    "serialize_bookmark",
    "start_in_thread",
    "temporal_sweep",
    "top_x_curve",
    "unmapped_recall",
]
