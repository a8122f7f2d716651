"""Mood fusion, track scoring, playlist generation, and feedback.

A track's score blends how well its mood label matches the current shift
step with how much the listener historically liked it.  Regulation mode
weights the mood match heavier; maintenance mode weights preference
heavier, so a liked matching track always outranks an unliked one there.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Mapping

from .context import ActionMode, ShiftPlan
from .errors import DataError
from .model import (
    Level,
    LevelPair,
    MoodLabel,
    MoodQuadrant,
    Track,
    UserProfile,
    levels_to_quadrant,
)
from .telemetry import StyleFlag

NEUTRAL_PREFERENCE = 0.5
SKIP_PENALTY = 0.1


class FeedbackKind(str, Enum):
    LIKED = "Liked"
    SKIPPED = "Skipped"
    PLAYED = "Played"


@dataclass(frozen=True)
class FusedMood:
    """Biometric mood after the telemetry check; conflict means telemetry overrode it."""

    quadrant: MoodQuadrant
    conflict: bool


@dataclass(frozen=True)
class WeightConfig:
    """Mood-match weight per action mode; the preference weight is 1 - mood."""

    regulation_mood: float = 0.7
    maintenance_mood: float = 0.4

    def __post_init__(self) -> None:
        for name in ("regulation_mood", "maintenance_mood"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")

    def weights_for(self, mode: ActionMode) -> tuple[float, float]:
        mood = self.regulation_mood if mode is ActionMode.REGULATION else self.maintenance_mood
        return mood, 1.0 - mood


@dataclass(frozen=True)
class ScoredTrack:
    track_id: str
    score: float
    mood_component: float
    pref_component: float


@dataclass(frozen=True)
class Playlist:
    """Ranked recommendations for one shift step (descending score, id tiebreak)."""

    segment_target: MoodQuadrant
    entries: tuple[ScoredTrack, ...]
    created_at: float = 0.0


@dataclass(frozen=True)
class FeedbackEvent:
    user_id: str
    track_id: str
    kind: FeedbackKind
    timestamp: float


def fuse_mood(biometric: LevelPair, style: StyleFlag) -> FusedMood:
    """Confirm or override the biometric mood with the driving-style flag.

    Aggressive driving forces the arousal level High (it signals an
    angry/aroused state) while keeping the biometric valence; the override
    is flagged as a conflict only when biometrics said arousal was Low.
    """
    if style is StyleFlag.CALM:
        return FusedMood(quadrant=levels_to_quadrant(biometric), conflict=False)
    forced = LevelPair(valence=biometric.valence, arousal=Level.HIGH)
    return FusedMood(
        quadrant=levels_to_quadrant(forced),
        conflict=biometric.arousal is Level.LOW,
    )


def preference(profile: UserProfile, track_id: str) -> float:
    """Taste score in [0, 1]: liked 1.0, unseen 0.5, skips subtract 0.1 each."""
    if track_id in profile.liked:
        return 1.0
    return max(0.0, NEUTRAL_PREFERENCE - SKIP_PENALTY * profile.skips.get(track_id, 0))


def score_track(
    track: Track,
    label: MoodLabel | None,
    segment_target: MoodQuadrant,
    profile: UserProfile,
    mode: ActionMode,
    weights: WeightConfig = WeightConfig(),
) -> ScoredTrack:
    """Blend mood match and preference; unlabeled tracks compete on preference alone."""
    mood = label.confidence if label is not None and label.quadrant is segment_target else 0.0
    pref = preference(profile, track.track_id)
    w_mood, w_pref = weights.weights_for(mode)
    return ScoredTrack(
        track_id=track.track_id,
        score=w_mood * mood + w_pref * pref,
        mood_component=mood,
        pref_component=pref,
    )


def generate_playlist(
    catalog: Mapping[str, Track],
    labels: Mapping[str, MoodLabel | None],
    profile: UserProfile,
    plan: ShiftPlan,
    mode: ActionMode,
    *,
    weights: WeightConfig = WeightConfig(),
    k: int = 10,
    created_at: float = 0.0,
) -> Playlist:
    """Top-k tracks for the plan's next step (score desc, track id asc)."""
    if not catalog:
        raise DataError("catalog is empty")
    if k < 1:
        raise ValueError(f"playlist size must be >= 1, got {k}")
    target = plan.next_step()
    scored = [
        score_track(track, labels.get(track_id), target, profile, mode, weights)
        for track_id, track in catalog.items()
    ]
    scored.sort(key=lambda s: (-s.score, s.track_id))
    return Playlist(segment_target=target, entries=tuple(scored[:k]), created_at=created_at)


def auto_select(playlist: Playlist, choice: str | None = None) -> str:
    """The user's pick if it is in the playlist, else the top-ranked track."""
    if not playlist.entries:
        raise DataError("playlist is empty")
    if choice is None:
        return playlist.entries[0].track_id
    if any(entry.track_id == choice for entry in playlist.entries):
        return choice
    raise DataError(f"track {choice!r} is not in the playlist")


# Anything with this call shape can stand in for generate_playlist in the
# session engine (used for degenerate baselines in evaluation).
PlaylistPolicy = Callable[
    [Mapping[str, Track], Mapping[str, "MoodLabel | None"], UserProfile, FusedMood, ShiftPlan, ActionMode],
    Playlist,
]


def apply_feedback(
    profile: UserProfile,
    event: FeedbackEvent,
    known_tracks: Mapping[str, Track] | frozenset[str] | set[str],
) -> UserProfile:
    """Fold one feedback event into the profile, returning a new profile.

    Liked adds the track and clears its skips; Skipped increments the skip
    count; Played changes nothing (it is logged upstream).  The input
    profile is never mutated.
    """
    if event.track_id not in known_tracks:
        raise DataError(f"unknown track id: {event.track_id!r}")
    if event.kind is FeedbackKind.LIKED:
        skips = {t: n for t, n in profile.skips.items() if t != event.track_id}
        return replace(profile, liked=profile.liked | {event.track_id}, skips=skips)
    if event.kind is FeedbackKind.SKIPPED:
        skips = dict(profile.skips)
        skips[event.track_id] = skips.get(event.track_id, 0) + 1
        return replace(profile, skips=skips)
    return profile
