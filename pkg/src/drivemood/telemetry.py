"""Telemetry chain: averaged speed samples -> acceleration -> jerk -> style.

Speed samples are interval averages, so acceleration comes from pairs of
subsequent measurements and jerk from pairs of subsequent accelerations.
Driving style is aggressive when mean absolute jerk over a window exceeds
the scenario's threshold (strictly).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import InsufficientDataError


class DriveScenario(str, Enum):
    URBAN = "Urban"
    SUBURBAN = "Suburban"
    HIGHWAY = "Highway"


class StyleFlag(str, Enum):
    AGGRESSIVE = "Aggressive"
    CALM = "Calm"


@dataclass(frozen=True)
class SpeedSample:
    """Average speed (m/s) over the interval ending at timestamp_s."""

    timestamp_s: float
    speed_mps: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.speed_mps) or self.speed_mps < 0:
            raise ValueError(f"speed must be finite and >= 0, got {self.speed_mps}")


@dataclass(frozen=True)
class JerkEstimate:
    """Jerk (m/s^3) attributed to the newest sample that produced it."""

    timestamp_s: float
    jerk: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.jerk):
            raise ValueError(f"jerk must be finite, got {self.jerk}")


@dataclass(frozen=True)
class ScenarioThresholds:
    """Per-scenario jerk thresholds, m/s^3.  Defaults are placeholders and
    should be overridden from configuration for any real use."""

    urban: float = 0.9
    suburban: float = 0.6
    highway: float = 0.3

    def __post_init__(self) -> None:
        for name in ("urban", "suburban", "highway"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} jerk threshold must be positive")

    def for_scenario(self, scenario: DriveScenario) -> float:
        return {
            DriveScenario.URBAN: self.urban,
            DriveScenario.SUBURBAN: self.suburban,
            DriveScenario.HIGHWAY: self.highway,
        }[scenario]


DEFAULT_THRESHOLDS = ScenarioThresholds()


def estimate_acceleration(prev: SpeedSample, curr: SpeedSample) -> tuple[float, float]:
    """(timestamp, acceleration) from two subsequent speed measurements."""
    dt = curr.timestamp_s - prev.timestamp_s
    if dt <= 0:
        raise ValueError(
            f"timestamps must be strictly increasing ({prev.timestamp_s} -> {curr.timestamp_s})"
        )
    return curr.timestamp_s, (curr.speed_mps - prev.speed_mps) / dt


def estimate_jerk(window: Sequence[SpeedSample]) -> JerkEstimate:
    """Jerk from three subsequent speed samples.

    With accelerations a1 at t1 and a2 at t2, jerk = (a2 - a1) / (t2 - t1),
    attributed to the newest timestamp.  For uniform spacing dt this is the
    second central difference (v2 - 2*v1 + v0) / dt^2.
    """
    if len(window) != 3:
        raise ValueError(f"need exactly 3 samples, got {len(window)}")
    t1, a1 = estimate_acceleration(window[0], window[1])
    t2, a2 = estimate_acceleration(window[1], window[2])
    return JerkEstimate(timestamp_s=t2, jerk=(a2 - a1) / (t2 - t1))


def jerk_series(samples: Sequence[SpeedSample]) -> list[JerkEstimate]:
    """Jerk estimates for every interior sample of a speed series."""
    return [estimate_jerk(samples[i - 2 : i + 1]) for i in range(2, len(samples))]


class JerkEstimator:
    """Streaming jerk estimator holding a ring of the last three samples.

    One instance per session; not safe to share across sessions.
    """

    def __init__(self) -> None:
        self._ring: deque[SpeedSample] = deque(maxlen=3)

    def push(self, sample: SpeedSample) -> JerkEstimate | None:
        """Feed one sample; returns an estimate once three are buffered."""
        if self._ring and sample.timestamp_s <= self._ring[-1].timestamp_s:
            raise ValueError(
                f"timestamps must be strictly increasing "
                f"({self._ring[-1].timestamp_s} -> {sample.timestamp_s})"
            )
        self._ring.append(sample)
        if len(self._ring) < 3:
            return None
        return estimate_jerk(tuple(self._ring))


def classify_style(
    jerks: Sequence[JerkEstimate],
    scenario: DriveScenario,
    thresholds: ScenarioThresholds = DEFAULT_THRESHOLDS,
) -> StyleFlag:
    """Aggressive iff mean |jerk| strictly exceeds the scenario threshold."""
    if not jerks:
        raise InsufficientDataError("cannot classify style from an empty jerk window")
    mean_abs = math.fsum(abs(j.jerk) for j in jerks) / len(jerks)
    if mean_abs > thresholds.for_scenario(scenario):
        return StyleFlag.AGGRESSIVE
    return StyleFlag.CALM
