"""Circumplex mood model and the shared catalog/profile record types.

Mood lives on a two-axis plane: valence (pleasant vs. unpleasant) and
arousal (activated vs. sleepy).  The four quadrants of that plane are the
discrete mood vocabulary used everywhere else: Happy, Angry, Sad, Tender.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Mapping

if TYPE_CHECKING:
    from .hrv import Baseline

logger = logging.getLogger(__name__)


class MoodQuadrant(str, Enum):
    """The four mood quadrants of the valence/arousal plane."""

    HAPPY = "Happy"    # valence high, arousal high
    TENDER = "Tender"  # valence high, arousal low
    SAD = "Sad"        # valence low, arousal low
    ANGRY = "Angry"    # valence low, arousal high


class Level(str, Enum):
    LOW = "Low"
    HIGH = "High"


@dataclass(frozen=True)
class LevelPair:
    """Binary valence/arousal levels, the coarse form of a mood point."""

    valence: Level
    arousal: Level


_LEVELS_TO_QUADRANT = {
    (Level.HIGH, Level.HIGH): MoodQuadrant.HAPPY,
    (Level.HIGH, Level.LOW): MoodQuadrant.TENDER,
    (Level.LOW, Level.LOW): MoodQuadrant.SAD,
    (Level.LOW, Level.HIGH): MoodQuadrant.ANGRY,
}
_QUADRANT_TO_LEVELS = {q: levels for levels, q in _LEVELS_TO_QUADRANT.items()}


@dataclass(frozen=True)
class ValenceArousal:
    """A mood point in [-1, 1] x [-1, 1].

    Non-finite components are rejected.  Finite out-of-range components are
    clamped into range (simulator noise may overshoot); the clamp is logged,
    not an error.
    """

    valence: float
    arousal: float

    def __post_init__(self) -> None:
        for name in ("valence", "arousal"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            clamped = min(1.0, max(-1.0, value))
            if clamped != value:
                logger.debug("clamping %s %g into [-1, 1]", name, value)
            object.__setattr__(self, name, clamped)


def levels_of(point: ValenceArousal) -> LevelPair:
    """Coarse levels of a mood point; >= 0 counts as High on both axes."""
    return LevelPair(
        valence=Level.HIGH if point.valence >= 0 else Level.LOW,
        arousal=Level.HIGH if point.arousal >= 0 else Level.LOW,
    )


def quadrant_of(point: ValenceArousal) -> MoodQuadrant:
    """Quadrant containing a mood point.  Total: the origin maps to Happy."""
    return levels_to_quadrant(levels_of(point))


def centroid_of(quadrant: MoodQuadrant, magnitude: float = 0.5) -> ValenceArousal:
    """Canonical mid-quadrant target point, (+-magnitude, +-magnitude)."""
    levels = quadrant_to_levels(quadrant)
    return ValenceArousal(
        valence=magnitude if levels.valence is Level.HIGH else -magnitude,
        arousal=magnitude if levels.arousal is Level.HIGH else -magnitude,
    )


def levels_to_quadrant(levels: LevelPair) -> MoodQuadrant:
    return _LEVELS_TO_QUADRANT[(levels.valence, levels.arousal)]


def quadrant_to_levels(quadrant: MoodQuadrant) -> LevelPair:
    valence, arousal = _QUADRANT_TO_LEVELS[quadrant]
    return LevelPair(valence=valence, arousal=arousal)


@dataclass(frozen=True)
class Track:
    """Catalog item: identity, display metadata, and social tag counts."""

    track_id: str
    title: str
    artist: str
    genre: str
    tags: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.track_id:
            raise ValueError("track_id must be non-empty")
        for tag, count in self.tags.items():
            if not isinstance(count, int) or isinstance(count, bool) or count < 1:
                raise ValueError(f"tag count for {tag!r} must be a positive integer, got {count!r}")


@dataclass(frozen=True)
class MoodLabel:
    """Winning quadrant for a track plus its normalized vote share."""

    quadrant: MoodQuadrant
    confidence: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence must be in [0, 1], got {self.confidence}")


@dataclass(frozen=True)
class UserProfile:
    """Listener identity, taste signals, and optional personal HRV baseline."""

    user_id: str
    name: str | None = None
    age: int | None = None
    profession: str | None = None
    liked: frozenset[str] = frozenset()
    skips: Mapping[str, int] = field(default_factory=dict)
    baseline: "Baseline | None" = None

    def __post_init__(self) -> None:
        if not self.user_id:
            raise ValueError("user_id must be non-empty")
        if self.age is not None and self.age <= 0:
            raise ValueError(f"age must be positive, got {self.age}")
        for track_id, count in self.skips.items():
            if count < 0:
                raise ValueError(f"skip count for {track_id!r} must be non-negative")
