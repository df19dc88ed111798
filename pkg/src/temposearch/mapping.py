"""Mapping free-text queries onto bookmark tags.

The pipeline per query:

1. Normalize the query into a reference tag (strip everything that is not
   a letter or digit). Example: "American Apparel" -> "americanapparel".
2. Collect candidate tags from the query's seed URLs: tags used there by
   at least `min_users` users who are also at least `min_fraction` of all
   users who posted those URLs.
3. Score each candidate against the reference tag and keep those at or
   above the score threshold; the reference tag itself is always kept.

Scoring combines how query-specific a tag is across the whole seed
collection (relative inverted query frequency) with how often it appears
on posts WITHOUT the reference tag (exclusiveness). Both land in [0, 1]
and the final score is their unweighted mean.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import SeedSet, normalize_tag
from .index import TemporalTagIndex
from .months import TimeWindow

SCORE_THRESHOLD = 0.7
MIN_CANDIDATE_USERS = 10
MIN_CANDIDATE_FRACTION = 0.10


class MappingError(ValueError):
    """Raised when a query cannot be mapped at all (e.g. empty reference tag)."""


@dataclass(frozen=True, slots=True)
class ScoredTag:
    """One candidate tag with its score breakdown."""

    tag: str
    idf: float
    rel_idf: float
    exclusiveness: float
    score: float
    accepted: bool

    def to_dict(self) -> dict:
        return {
            "tag": self.tag,
            "idf": self.idf,
            "relIdf": self.rel_idf,
            "exclusiveness": self.exclusiveness,
            "score": self.score,
            "accepted": self.accepted,
        }


@dataclass(frozen=True, slots=True)
class TagMapping:
    """Final mapping for one query: accepted tags plus the full scoring trail."""

    query: str
    reference_tag: str
    tags: frozenset[str]
    scored: tuple[ScoredTag, ...]

    def to_dict(self) -> dict:
        return {
            "query": self.query,
            "referenceTag": self.reference_tag,
            "tags": sorted(self.tags),
            "scored": [s.to_dict() for s in self.scored],
        }


def reference_tag_for(query: str) -> str:
    tag = normalize_tag(query)
    if not tag:
        raise MappingError(f"query {query!r} normalizes to an empty tag")
    return tag


def accepted_tags(
    scores: Mapping[str, float], reference: str, threshold: float = SCORE_THRESHOLD
) -> frozenset[str]:
    """Tags scoring at or above `threshold`, plus the reference tag always."""
    return frozenset(tag for tag, score in scores.items() if score >= threshold) | {reference}


class MappingCorpus:
    """Seed sets plus the index, with candidate-set bookkeeping for idf.

    ``candidate_sets`` holds, per query, the tags that survived the usage
    filter (reference tag included). idf of a tag is driven by how many of
    these sets contain it.
    """

    def __init__(
        self,
        index: TemporalTagIndex,
        seed_sets: Sequence[SeedSet],
        *,
        min_users: int = MIN_CANDIDATE_USERS,
        min_fraction: float = MIN_CANDIDATE_FRACTION,
        global_usage: bool = False,
    ):
        if len(seed_sets) < 2:
            raise MappingError("at least two seed sets are required (idf needs |queries| >= 2)")
        self.index = index
        self.seed_sets = tuple(seed_sets)
        self.min_users = min_users
        self.min_fraction = min_fraction
        self.global_usage = global_usage

        self.candidate_sets: dict[str, frozenset[str]] = {}
        self.reference_tags: dict[str, str] = {}
        tag_query_count: dict[str, int] = {}
        for seed_set in self.seed_sets:
            ref = reference_tag_for(seed_set.query)
            candidates = self._filter_candidates(seed_set)
            candidates = candidates | {ref}
            self.candidate_sets[seed_set.query] = frozenset(candidates)
            self.reference_tags[seed_set.query] = ref
            for tag in candidates:
                tag_query_count[tag] = tag_query_count.get(tag, 0) + 1
        self.tag_query_count = tag_query_count

    @property
    def query_count(self) -> int:
        return len(self.seed_sets)

    def _filter_candidates(self, seed_set: SeedSet) -> set[str]:
        user_count, poster_count = self.index.candidate_tags_for_urls(seed_set.seeds)
        if poster_count == 0:
            return set()
        keep: set[str] = set()
        for tag, users_here in user_count.items():
            # The fraction check is always against seed-URL posters; only the
            # minimum-users check can optionally look at global tag usage.
            usage = self.index.tag_user_count(tag) if self.global_usage else users_here
            if usage >= self.min_users and users_here >= self.min_fraction * poster_count:
                keep.add(tag)
        return keep

    def idf(self, tag: str) -> float:
        """ln(#queries) over the number of candidate sets containing `tag`.

        The denominator is clamped to 1 so unseen tags get the maximum.
        """
        return math.log(self.query_count) / max(1, self.tag_query_count.get(tag, 0))

    def rel_idf(self, tag: str, reference: str) -> float:
        """idf of `tag` relative to the reference tag's idf.

        The idf quotient reduces algebraically to the candidate-set count
        ratio (reference over tag), so we compute that ratio directly: one
        correctly rounded division, independent of the logarithm base.
        """
        ref_count = max(1, self.tag_query_count.get(reference, 0))
        tag_count = max(1, self.tag_query_count.get(tag, 0))
        return ref_count / tag_count

    def exclusiveness(
        self, tag: str, reference: str, window: TimeWindow | None = None
    ) -> float:
        """1 minus the co-post rate of `tag` with the reference tag.

        The co-post count is normalized by the rarer of the two tags, so a
        tag fully nested inside the reference's posts scores 0. When either
        tag has no posts at all the pair cannot co-occur; that counts as
        fully exclusive (1.0).
        """
        alone = min(
            self.index.posts_count([tag], window),
            self.index.posts_count([reference], window),
        )
        if alone == 0:
            return 1.0
        together = self.index.posts_count([tag, reference], window)
        return 1.0 - together / alone

    def score(self, tag: str, reference: str, window: TimeWindow | None = None) -> float:
        return 0.5 * (self.rel_idf(tag, reference) + self.exclusiveness(tag, reference, window))

    def map_query(
        self,
        query: str,
        *,
        threshold: float = SCORE_THRESHOLD,
        window: TimeWindow | None = None,
    ) -> TagMapping:
        """Score the query's candidates and keep those at or above `threshold`.

        The reference tag always ends up accepted, whatever its score.
        """
        if query not in self.candidate_sets:
            raise MappingError(f"query {query!r} has no seed set")
        reference = self.reference_tags[query]
        parts = {}
        for tag in sorted(self.candidate_sets[query]):
            rel = self.rel_idf(tag, reference)
            excl = self.exclusiveness(tag, reference, window)
            parts[tag] = (rel, excl, 0.5 * (rel + excl))
        accepted = accepted_tags({t: p[2] for t, p in parts.items()}, reference, threshold)
        scored = tuple(
            ScoredTag(
                tag=tag,
                idf=self.idf(tag),
                rel_idf=rel,
                exclusiveness=excl,
                score=score,
                accepted=tag in accepted,
            )
            for tag, (rel, excl, score) in parts.items()
        )
        return TagMapping(
            query=query,
            reference_tag=reference,
            tags=accepted,
            scored=scored,
        )

    def map_all(
        self, *, threshold: float = SCORE_THRESHOLD, window: TimeWindow | None = None
    ) -> dict[str, TagMapping]:
        return {
            seed_set.query: self.map_query(seed_set.query, threshold=threshold, window=window)
            for seed_set in self.seed_sets
        }


def build_mapping_corpus(
    index: TemporalTagIndex,
    seed_sets: Sequence[SeedSet],
    *,
    min_users: int = MIN_CANDIDATE_USERS,
    min_fraction: float = MIN_CANDIDATE_FRACTION,
    global_usage: bool = False,
) -> MappingCorpus:
    return MappingCorpus(
        index,
        seed_sets,
        min_users=min_users,
        min_fraction=min_fraction,
        global_usage=global_usage,
    )


def save_mappings(mappings: Mapping[str, TagMapping], path: str | Path) -> None:
    """One JSON object per line, sorted by query for determinism."""
    with open(path, "w", encoding="utf-8") as handle:
        for query in sorted(mappings):
            handle.write(
                json.dumps(mappings[query].to_dict(), sort_keys=True, separators=(",", ":"))
                + "\n"
            )


def load_mappings(path: str | Path) -> dict[str, TagMapping]:
    mappings: dict[str, TagMapping] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            raw = json.loads(line)
            scored = tuple(
                ScoredTag(
                    tag=s["tag"],
                    idf=s["idf"],
                    rel_idf=s["relIdf"],
                    exclusiveness=s["exclusiveness"],
                    score=s["score"],
                    accepted=s["accepted"],
                )
                for s in raw["scored"]
            )
            mappings[raw["query"]] = TagMapping(
                query=raw["query"],
                reference_tag=raw["referenceTag"],
                tags=frozenset(raw["tags"]),
                scored=scored,
            )
    return mappings
