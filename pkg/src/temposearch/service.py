"""Embedded HTTP API over an immutable in-memory index.

Read-only and stateless per request: the index, stats, and mappings are
loaded before the server starts and never change while it runs (reload =
restart). That makes concurrent handling trivially safe and responses for
identical requests byte-identical.

Endpoints (all GET, JSON bodies):
  /api/search?q=&from=&to=&limit=   retrieval for a mapped query
  /api/search?tags=a,b&from=&to=    retrieval for an explicit tag set
  /api/map?q=                       mapping with all scores, rejects included
  /api/histogram?tags=&from=&to=    monthly all-tags post counts
  /api/stats                        corpus stats and month bounds

Error bodies are {"error": ...} with 400 for malformed parameters and 404
for unknown queries or paths. CORS is permissive for UI development. An
optional static directory is served at / for the browser frontend.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Mapping
from urllib.parse import parse_qs, urlsplit

from .corpus import IngestStats, normalize_tag
from .index import TemporalTagIndex
from .mapping import TagMapping
from .months import TimeWindow
from .search import monthly_histogram, search_tags

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
    ".map": "application/json",
}


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


def _dump(payload) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


def find_mapping(mappings: Mapping[str, TagMapping], query: str) -> TagMapping | None:
    """Look up a mapping by query, exact first, then case-insensitively."""
    if query in mappings:
        return mappings[query]
    wanted = query.strip().casefold()
    for key in sorted(mappings):
        if key.strip().casefold() == wanted:
            return mappings[key]
    return None


class SearchService:
    """Request-independent state plus one handler method per endpoint."""

    def __init__(
        self,
        index: TemporalTagIndex,
        mappings: Mapping[str, TagMapping],
        stats: IngestStats | dict | None = None,
        static_dir: str | Path | None = None,
    ):
        self.index = index
        self.mappings = dict(mappings)
        if isinstance(stats, IngestStats):
            stats = stats.to_dict()
        self.stats = stats
        self.static_dir = Path(static_dir).resolve() if static_dir else None

    # -- parameter helpers ------------------------------------------------

    def _window(self, params: dict[str, list[str]]) -> TimeWindow:
        bounds = self.index.month_bounds
        start = params.get("from", [None])[0]
        end = params.get("to", [None])[0]
        if start is None or end is None:
            if bounds is None:
                raise ApiError(400, "index is empty; from and to are required")
            start = start if start is not None else bounds[0]
            end = end if end is not None else bounds[1]
        try:
            return TimeWindow(start, end)
        except ValueError as exc:
            raise ApiError(400, str(exc)) from None

    def _tags_param(self, params: dict[str, list[str]]) -> frozenset[str] | None:
        raw = params.get("tags", [None])[0]
        if raw is None:
            return None
        tags = {normalize_tag(t) for t in raw.split(",")}
        tags.discard("")
        if not tags:
            raise ApiError(400, "tags parameter contains no usable tags")
        return frozenset(tags)

    def _limit_param(self, params: dict[str, list[str]]) -> int | None:
        raw = params.get("limit", [None])[0]
        if raw is None:
            return None
        try:
            limit = int(raw)
        except ValueError:
            raise ApiError(400, f"limit must be an integer, got {raw!r}") from None
        if limit < 0:
            raise ApiError(400, "limit must be non-negative")
        return limit

    # -- endpoints ---------------------------------------------------------

    def api_search(self, params: dict[str, list[str]]) -> dict:
        query = params.get("q", [None])[0]
        tags = self._tags_param(params)
        window = self._window(params)
        limit = self._limit_param(params)
        if query is None and tags is None:
            raise ApiError(400, "q or tags parameter is required")
        echo = query or ""
        if tags is None:
            mapping = find_mapping(self.mappings, query)
            if mapping is None:
                raise ApiError(404, f"no mapping for query {query!r}")
            tags = mapping.tags
            echo = mapping.query
        return search_tags(self.index, tags, window, limit, query=echo).to_dict()

    def api_map(self, params: dict[str, list[str]]) -> dict:
        query = params.get("q", [None])[0]
        if query is None:
            raise ApiError(400, "q parameter is required")
        mapping = find_mapping(self.mappings, query)
        if mapping is None:
            raise ApiError(404, f"no mapping for query {query!r}")
        return mapping.to_dict()

    def api_histogram(self, params: dict[str, list[str]]) -> dict:
        tags = self._tags_param(params)
        if tags is None:
            raise ApiError(400, "tags parameter is required")
        window = self._window(params)
        histogram = monthly_histogram(self.index, tags, window)
        return {
            "tags": sorted(tags),
            "from": window.start,
            "to": window.end,
            "histogram": [{"month": month, "count": count} for month, count in histogram],
        }

    def api_stats(self, params: dict[str, list[str]]) -> dict:
        if self.stats is not None:
            stats = dict(self.stats)
        else:
            # Serving a bare snapshot: derive what the index itself knows.
            stats = {
                "bookmarks": len(self.index.records),
                "unique_urls": len({r.url for r in self.index.records}),
                "unique_tags": len(self.index.postings),
                "unique_users": len({r.user for r in self.index.records}),
                "rejected_lines": 0,
                "rejects_by_reason": {},
            }
        bounds = self.index.month_bounds
        return {
            "bookmarks": stats["bookmarks"],
            "uniqueUrls": stats["unique_urls"],
            "uniqueTags": stats["unique_tags"],
            "uniqueUsers": stats["unique_users"],
            "rejectedLines": stats["rejected_lines"],
            "rejectsByReason": stats["rejects_by_reason"],
            "records": len(self.index.records),
            "monthBounds": list(bounds) if bounds else None,
        }

    ROUTES = {
        "/api/search": api_search,
        "/api/map": api_map,
        "/api/histogram": api_histogram,
        "/api/stats": api_stats,
    }

    def handle_api(self, path: str, params: dict[str, list[str]]) -> tuple[int, bytes]:
        route = self.ROUTES.get(path)
        if route is None:
            return 404, _dump({"error": f"unknown endpoint {path}"})
        try:
            return 200, _dump(route(self, params))
        except ApiError as exc:
            return exc.status, _dump({"error": exc.message})

    def resolve_static(self, path: str) -> Path | None:
        if self.static_dir is None:
            return None
        relative = path.lstrip("/") or "index.html"
        candidate = (self.static_dir / relative).resolve()
        if not candidate.is_relative_to(self.static_dir):
            return None
        if candidate.is_dir():
            candidate = candidate / "index.html"
        return candidate if candidate.is_file() else None


class _Handler(BaseHTTPRequestHandler):
    service: SearchService
    verbose = False

    def log_message(self, format: str, *args) -> None:
        if self.verbose:
            super().log_message(format, *args)

    def _send(self, status: int, body: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def do_OPTIONS(self) -> None:
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    def do_GET(self) -> None:
        parts = urlsplit(self.path)
        if parts.path.startswith("/api/"):
            status, body = self.service.handle_api(parts.path, parse_qs(parts.query))
            self._send(status, body, "application/json")
            return
        static = self.service.resolve_static(parts.path)
        if static is not None:
            content_type = _CONTENT_TYPES.get(static.suffix, "application/octet-stream")
            self._send(200, static.read_bytes(), content_type)
            return
        self._send(404, _dump({"error": f"not found: {parts.path}"}), "application/json")


def make_server(
    service: SearchService, host: str = "127.0.0.1", port: int = 0, verbose: bool = False
) -> ThreadingHTTPServer:
    """Bind a threading HTTP server for `service`; port 0 picks a free one."""
    handler = type("Handler", (_Handler,), {"service": service, "verbose": verbose})
    return ThreadingHTTPServer((host, port), handler)


def start_in_thread(service: SearchService, host: str = "127.0.0.1") -> tuple[ThreadingHTTPServer, int]:
    """Run the service on a daemon thread; returns (server, bound port)."""
    server = make_server(service, host, 0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, server.server_address[1]
