"""Heart-rate-variability window features and the mood detector.

Per-window features are mean heart rate, SDNN, and RMSSD over RR intervals.
The detector reads arousal from mean HR against a personal baseline and
valence from RMSSD (higher parasympathetic tone reads as positive/calm).
It is a transparent threshold stand-in and is kept pluggable: anything with
the same call shape can replace detect_mood in the session engine.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ArtifactError, InsufficientDataError
from .model import Level, LevelPair, ValenceArousal

# RR intervals outside this open interval are rejected as artifacts.
RR_MIN_MS = 300.0
RR_MAX_MS = 2000.0

MIN_WINDOW_SAMPLES = 10
MIN_CALIBRATION_WINDOWS = 3


@dataclass(frozen=True)
class RRSample:
    """One inter-beat interval: timestamp (ms since session start) and RR (ms)."""

    timestamp_ms: float
    rr_ms: float


@dataclass(frozen=True)
class HRVFeatures:
    mean_hr: float          # beats per minute, 60000 / mean(rr)
    sdnn: float             # ms, population standard deviation of rr
    rmssd: float            # ms, sqrt(mean of squared successive rr differences)
    window_start_ms: float
    window_end_ms: float
    sample_count: int


@dataclass(frozen=True)
class Baseline:
    """Personal resting calibration: median HR and median RMSSD."""

    hr: float
    rmssd: float

    def __post_init__(self) -> None:
        if self.hr <= 0 or self.rmssd <= 0:
            raise ValueError(f"baseline values must be positive, got hr={self.hr}, rmssd={self.rmssd}")


@dataclass(frozen=True)
class DetectorConfig:
    """Thresholds for the baseline-relative detector (placeholder constants).

    delta_arousal: HR must exceed baseline by this fraction to read High arousal.
    delta_valence: RMSSD within this fraction below baseline still reads High valence.
    arousal_norm: HR excursion, as a fraction of baseline HR, that maps to |arousal| = 1.
    """

    delta_arousal: float = 0.05
    delta_valence: float = 0.10
    arousal_norm: float = 0.25

    def __post_init__(self) -> None:
        if self.delta_arousal < 0 or not 0 <= self.delta_valence <= 1 or self.arousal_norm <= 0:
            raise ValueError("detector thresholds out of range")


def compute_features(window: Sequence[RRSample]) -> HRVFeatures:
    """Time-domain HRV features over one window of RR samples.

    Requires at least MIN_WINDOW_SAMPLES time-ordered samples; RR values
    outside (RR_MIN_MS, RR_MAX_MS) raise ArtifactError naming the sample.
    """
    if len(window) < MIN_WINDOW_SAMPLES:
        raise InsufficientDataError(
            f"need at least {MIN_WINDOW_SAMPLES} RR samples, got {len(window)}"
        )
    previous_ts = None
    for sample in window:
        if not RR_MIN_MS < sample.rr_ms < RR_MAX_MS:
            raise ArtifactError(
                f"rr {sample.rr_ms} ms at t={sample.timestamp_ms} ms outside "
                f"({RR_MIN_MS:g}, {RR_MAX_MS:g})"
            )
        if previous_ts is not None and sample.timestamp_ms < previous_ts:
            raise ValueError(f"window not time-ordered at t={sample.timestamp_ms} ms")
        previous_ts = sample.timestamp_ms

    rr = np.asarray([s.rr_ms for s in window], dtype=float)
    diffs = np.diff(rr)
    return HRVFeatures(
        mean_hr=float(60000.0 / rr.mean()),
        sdnn=float(rr.std()),
        rmssd=float(np.sqrt(np.mean(diffs * diffs))),
        window_start_ms=window[0].timestamp_ms,
        window_end_ms=window[-1].timestamp_ms,
        sample_count=len(window),
    )


def calibrate_baseline(windows: Sequence[HRVFeatures]) -> Baseline:
    """Personal baseline as the medians over calibration windows (>= 3)."""
    if len(windows) < MIN_CALIBRATION_WINDOWS:
        raise InsufficientDataError(
            f"need at least {MIN_CALIBRATION_WINDOWS} calibration windows, got {len(windows)}"
        )
    return Baseline(
        hr=statistics.median(w.mean_hr for w in windows),
        rmssd=statistics.median(w.rmssd for w in windows),
    )


def detect_mood(
    features: HRVFeatures,
    baseline: Baseline,
    config: DetectorConfig = DetectorConfig(),
) -> tuple[LevelPair, ValenceArousal]:
    """Binary levels plus a continuous mood point, relative to the baseline.

    Arousal is High iff mean HR exceeds baseline by more than delta_arousal
    (strict); valence is High iff RMSSD is no more than delta_valence below
    baseline (inclusive).  The continuous point is advisory: levels drive
    recommendation, the point feeds reporting and the simulator.
    """
    arousal_level = (
        Level.HIGH
        if features.mean_hr > baseline.hr * (1.0 + config.delta_arousal)
        else Level.LOW
    )
    valence_level = (
        Level.HIGH
        if features.rmssd >= baseline.rmssd * (1.0 - config.delta_valence)
        else Level.LOW
    )
    arousal = (features.mean_hr - baseline.hr) / (config.arousal_norm * baseline.hr)
    valence = (features.rmssd - baseline.rmssd) / baseline.rmssd
    point = ValenceArousal(
        valence=min(1.0, max(-1.0, valence)),
        arousal=min(1.0, max(-1.0, arousal)),
    )
    return LevelPair(valence=valence_level, arousal=arousal_level), point
