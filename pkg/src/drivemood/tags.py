"""Tag-folksonomy mood classification of tracks.

A lexicon maps community tags to one of the four mood quadrants with a
positive weight.  A track's quadrant is decided by the weighted vote of its
matching tags: raw score of quadrant q = sum over matching tags of
(tag count x lexicon weight), normalized across the four quadrants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

from .errors import DataError, ParseError
from .model import MoodLabel, MoodQuadrant, Track

# Ties resolve toward the mood safest for driving first, then by
# descending driving-favorability.
TIE_BREAK_ORDER = (
    MoodQuadrant.TENDER,
    MoodQuadrant.HAPPY,
    MoodQuadrant.SAD,
    MoodQuadrant.ANGRY,
)

# Lexicon quadrant names are case-sensitive.
_QUADRANT_NAMES = {q.value: q for q in MoodQuadrant}


class LexiconEntry(NamedTuple):
    quadrant: MoodQuadrant
    weight: float


@dataclass(frozen=True)
class MoodLexicon:
    """Immutable tag -> (quadrant, weight) table; tags lower-cased and trimmed."""

    entries: Mapping[str, LexiconEntry]

    def __len__(self) -> int:
        return len(self.entries)


def load_lexicon(lines: Iterable[str], *, source: str | None = None) -> MoodLexicon:
    """Parse a lexicon from tab-separated rows ``tag<TAB>quadrant<TAB>weight``.

    ``#``-prefixed comment lines and blank lines are skipped.  Tags are
    normalized to lower case and trimmed; duplicates are an error, as are
    unknown quadrant names and non-positive weights.
    """
    entries: dict[str, LexiconEntry] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        columns = line.split("\t")
        if len(columns) != 3:
            raise ParseError(
                f"expected 3 tab-separated columns, got {len(columns)}",
                path=source, line=lineno,
            )
        tag = columns[0].strip().lower()
        if not tag:
            raise ParseError("empty tag", path=source, line=lineno)
        quadrant = _QUADRANT_NAMES.get(columns[1])
        if quadrant is None:
            raise ParseError(f"unknown quadrant {columns[1]!r}", path=source, line=lineno)
        try:
            weight = float(columns[2])
        except ValueError:
            raise ParseError(f"bad weight {columns[2]!r}", path=source, line=lineno) from None
        if not math.isfinite(weight) or weight <= 0:
            raise ParseError(f"weight must be positive, got {columns[2]}", path=source, line=lineno)
        if tag in entries:
            raise ParseError(f"duplicate tag {tag!r}", path=source, line=lineno)
        entries[tag] = LexiconEntry(quadrant=quadrant, weight=weight)
    return MoodLexicon(entries=entries)


def load_lexicon_file(path: str | Path) -> MoodLexicon:
    with open(path, encoding="utf-8") as fh:
        return load_lexicon(fh, source=str(path))


def default_lexicon_path() -> Path:
    """Path of the packaged seed lexicon (hand-curated placeholder data)."""
    return Path(str(resources.files("drivemood").joinpath("data/lexicon.tsv")))


def default_lexicon() -> MoodLexicon:
    return load_lexicon_file(default_lexicon_path())


@dataclass(frozen=True)
class ClusterScores:
    """Normalized per-quadrant vote shares; all zero when nothing matched."""

    scores: Mapping[MoodQuadrant, float]

    def __getitem__(self, quadrant: MoodQuadrant) -> float:
        return self.scores[quadrant]

    @property
    def matched(self) -> bool:
        return any(v != 0.0 for v in self.scores.values())


def _normalized_tags(track: Track) -> dict[str, int]:
    # Raw tags that normalize to the same key pool their counts.
    merged: dict[str, int] = {}
    for tag, count in track.tags.items():
        key = tag.strip().lower()
        merged[key] = merged.get(key, 0) + count
    return merged


def raw_scores(track: Track, lexicon: MoodLexicon) -> dict[MoodQuadrant, float]:
    """Unnormalized weighted vote per quadrant; unmatched tags are ignored.

    Sums use math.fsum, so the result is independent of tag order.
    """
    terms: dict[MoodQuadrant, list[float]] = {q: [] for q in MoodQuadrant}
    for tag, count in _normalized_tags(track).items():
        entry = lexicon.entries.get(tag)
        if entry is not None:
            terms[entry.quadrant].append(count * entry.weight)
    return {q: math.fsum(values) for q, values in terms.items()}


def cluster_scores(track: Track, lexicon: MoodLexicon) -> ClusterScores:
    """Normalized vote vector over the four quadrants (all zero if no match)."""
    raw = raw_scores(track, lexicon)
    total = math.fsum(raw.values())
    if total == 0.0:
        return ClusterScores(scores={q: 0.0 for q in MoodQuadrant})
    return ClusterScores(scores={q: value / total for q, value in raw.items()})


def classify_track(track: Track, lexicon: MoodLexicon) -> MoodLabel | None:
    """Label a track with its winning quadrant, or None when no tag matched.

    Ties resolve by TIE_BREAK_ORDER; confidence is the winning share.
    """
    scores = cluster_scores(track, lexicon)
    if not scores.matched:
        return None
    best = max(TIE_BREAK_ORDER, key=lambda q: scores[q])
    return MoodLabel(quadrant=best, confidence=scores[best])


def classify_catalog(
    tracks: Iterable[Track], lexicon: MoodLexicon
) -> dict[str, MoodLabel | None]:
    """Classify every track; duplicate track ids are an error."""
    labels: dict[str, MoodLabel | None] = {}
    for track in tracks:
        if track.track_id in labels:
            raise DataError(f"duplicate track id: {track.track_id!r}")
        labels[track.track_id] = classify_track(track, lexicon)
    return labels
