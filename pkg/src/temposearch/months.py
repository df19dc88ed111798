"""Calendar-month arithmetic and inclusive month windows.

Months are "YYYY-MM" strings everywhere in the public API; zero-padding
makes lexicographic order equal chronological order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone

_MONTH_RE = re.compile(r"^(\d{4})-(\d{2})$")


def month_index(month: str) -> int:
    """Convert "YYYY-MM" to a linear month count (for offset arithmetic)."""
    m = _MONTH_RE.match(month)
    if not m:
        raise ValueError(f"not a YYYY-MM month: {month!r}")
    year, mon = int(m.group(1)), int(m.group(2))
    if not 1 <= mon <= 12:
        raise ValueError(f"month out of range: {month!r}")
    return year * 12 + (mon - 1)


def month_str(index: int) -> str:
    """Inverse of :func:`month_index`."""
    year, mon = divmod(index, 12)
    return f"{year:04d}-{mon + 1:02d}"


def add_months(month: str, delta: int) -> str:
    return month_str(month_index(month) + delta)


def month_of_timestamp(timestamp: str) -> str:
    """Calendar month (UTC) of an ISO-8601 timestamp.

    Naive timestamps are taken as UTC. Raises ValueError on anything
    :func:`datetime.fromisoformat` cannot parse (after mapping a trailing
    "Z" to "+00:00", which 3.10 does not accept natively).
    """
    raw = timestamp.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    dt = datetime.fromisoformat(raw)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    dt = dt.astimezone(timezone.utc)
    return f"{dt.year:04d}-{dt.month:02d}"


@dataclass(frozen=True, slots=True)
class TimeWindow:
    """Inclusive month range [start, end]."""

    start: str
    end: str

    def __post_init__(self) -> None:
        lo, hi = month_index(self.start), month_index(self.end)
        if lo > hi:
            raise ValueError(f"window start {self.start} after end {self.end}")

    def contains(self, month: str) -> bool:
        return self.start <= month <= self.end

    def bounds(self) -> tuple[int, int]:
        return month_index(self.start), month_index(self.end)

    def months(self) -> list[str]:
        lo, hi = self.bounds()
        return [month_str(i) for i in range(lo, hi + 1)]

    def extended(self, past: int, future: int) -> "TimeWindow":
        """Widen by whole months on either side (both non-negative)."""
        if past < 0 or future < 0:
            raise ValueError("window extensions must be non-negative")
        return TimeWindow(add_months(self.start, -past), add_months(self.end, future))
