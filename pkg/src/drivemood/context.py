"""Drive context: day phase, target mood, and gradual mood-shift planning.

Daytime targets Tender (no extra stimulation needed); night targets Happy
(keep the driver alert).  Shifts between quadrants move one affect axis at
a time, de-escalating arousal first whenever the driver is aroused.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import time
from enum import Enum

from .model import Level, LevelPair, MoodQuadrant, levels_to_quadrant, quadrant_to_levels
from .telemetry import DriveScenario


class DayPhase(str, Enum):
    DAY = "Day"
    NIGHT = "Night"


class ActionMode(str, Enum):
    REGULATION = "Regulation"    # current mood differs from the target
    MAINTENANCE = "Maintenance"  # already at the target, keep it


@dataclass(frozen=True)
class DayWindow:
    """Half-open local-time window counted as Day; may wrap midnight."""

    start: time = time(7, 0)
    end: time = time(20, 0)


@dataclass(frozen=True)
class ContextSnapshot:
    """Context carried alongside a recommendation cycle."""

    local_time: time
    day_phase: DayPhase
    scenario: DriveScenario
    location: tuple[float, float] | None = None


def day_phase(local_time: time, window: DayWindow = DayWindow()) -> DayPhase:
    """Day iff local_time is inside [window.start, window.end)."""
    if window.start <= window.end:
        is_day = window.start <= local_time < window.end
    else:  # window wraps midnight
        is_day = local_time >= window.start or local_time < window.end
    return DayPhase.DAY if is_day else DayPhase.NIGHT


def snapshot(
    local_time: time,
    scenario: DriveScenario,
    window: DayWindow = DayWindow(),
    location: tuple[float, float] | None = None,
) -> ContextSnapshot:
    """Build a snapshot whose day_phase is consistent with local_time."""
    return ContextSnapshot(
        local_time=local_time,
        day_phase=day_phase(local_time, window),
        scenario=scenario,
        location=location,
    )


def target_mood(phase: DayPhase) -> MoodQuadrant:
    """Default recommended mood for the phase: Day -> Tender, Night -> Happy."""
    return MoodQuadrant.TENDER if phase is DayPhase.DAY else MoodQuadrant.HAPPY


def action_mode(current: MoodQuadrant, target: MoodQuadrant) -> ActionMode:
    return ActionMode.MAINTENANCE if current == target else ActionMode.REGULATION


def _axis_changes(a: MoodQuadrant, b: MoodQuadrant) -> int:
    la, lb = quadrant_to_levels(a), quadrant_to_levels(b)
    return int(la.valence != lb.valence) + int(la.arousal != lb.arousal)


@dataclass(frozen=True)
class ShiftPlan:
    """Ordered quadrant path from current to target mood.

    Each consecutive pair differs on exactly one affect axis; length is
    1 (already there), 2 (adjacent quadrants), or 3 (diagonal).
    """

    steps: tuple[MoodQuadrant, ...]

    def __post_init__(self) -> None:
        if not 1 <= len(self.steps) <= 3:
            raise ValueError(f"plan length must be 1..3, got {len(self.steps)}")
        for a, b in zip(self.steps, self.steps[1:]):
            if _axis_changes(a, b) != 1:
                raise ValueError(f"consecutive steps must differ on exactly one axis: {a} -> {b}")

    @property
    def current(self) -> MoodQuadrant:
        return self.steps[0]

    @property
    def target(self) -> MoodQuadrant:
        return self.steps[-1]

    def next_step(self) -> MoodQuadrant:
        """The quadrant the next playlist should target."""
        return self.steps[1] if len(self.steps) > 1 else self.steps[0]


def plan_shift(current: MoodQuadrant, target: MoodQuadrant) -> ShiftPlan:
    """Gradual one-axis-per-step path from current to target.

    Diagonal moves pick the intermediate quadrant by flipping arousal first
    when the current arousal is High (de-escalation priority), valence
    first otherwise.
    """
    if current == target:
        return ShiftPlan(steps=(current,))
    if _axis_changes(current, target) == 1:
        return ShiftPlan(steps=(current, target))
    cur = quadrant_to_levels(current)
    tgt = quadrant_to_levels(target)
    if cur.arousal is Level.HIGH:
        mid = levels_to_quadrant(LevelPair(valence=cur.valence, arousal=tgt.arousal))
    else:
        mid = levels_to_quadrant(LevelPair(valence=tgt.valence, arousal=cur.arousal))
    return ShiftPlan(steps=(current, mid, target))
