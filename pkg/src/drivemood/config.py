"""Flat key=value application configuration; CLI flags override file values.

Every tunable named elsewhere in the package has a key here.  Unknown keys
are rejected so typos fail loudly.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from datetime import time
from pathlib import Path
from typing import Callable, Iterable

from .context import DayWindow
from .errors import DataError, ParseError
from .hrv import DetectorConfig
from .model import ValenceArousal
from .recommend import WeightConfig
from .sim import SimConfig
from .telemetry import DriveScenario, ScenarioThresholds


@dataclass(frozen=True)
class AppConfig:
    data_dir: Path = Path("data")
    detector: DetectorConfig = DetectorConfig()
    thresholds: ScenarioThresholds = ScenarioThresholds()
    weights: WeightConfig = WeightConfig()
    day_window: DayWindow = DayWindow()
    playlist_k: int = 10
    track_count: int = 30
    start_valence: float = 0.0
    start_arousal: float = 0.0
    clock_start: time = time(12, 0)
    scenario: DriveScenario = DriveScenario.URBAN
    alpha: float = 0.2
    noise_std: float = 0.0
    base_hr: float = 60.0
    base_rmssd: float = 40.0
    hr_gain: float = 20.0
    rmssd_gain: float = 0.5
    jerk_max: float = 3.0
    bio_window: int = 30
    tel_samples: int = 31
    tel_dt: float = 1.0
    cruise_speed: float = 15.0
    step_seconds: float = 180.0

    def sim_config(self, seed: int) -> SimConfig:
        """Engine configuration for one session with the given seed."""
        return SimConfig(
            seed=seed,
            track_count=self.track_count,
            start=ValenceArousal(self.start_valence, self.start_arousal),
            clock_start=self.clock_start,
            scenario=self.scenario,
            alpha=self.alpha,
            noise_std=self.noise_std,
            base_hr=self.base_hr,
            base_rmssd=self.base_rmssd,
            hr_gain=self.hr_gain,
            rmssd_gain=self.rmssd_gain,
            jerk_max=self.jerk_max,
            bio_window=self.bio_window,
            tel_samples=self.tel_samples,
            tel_dt=self.tel_dt,
            cruise_speed=self.cruise_speed,
            step_seconds=self.step_seconds,
            detector=self.detector,
            thresholds=self.thresholds,
            weights=self.weights,
            playlist_k=self.playlist_k,
            day_window=self.day_window,
        )


def _parse_time(raw: str) -> time:
    return time.fromisoformat(raw)


def _parse_scenario(raw: str) -> DriveScenario:
    try:
        return DriveScenario(raw)
    except ValueError:
        raise ValueError(f"must be one of {', '.join(s.value for s in DriveScenario)}") from None


# key -> (group, field name, converter)
_KEYS: dict[str, tuple[str, str, Callable[[str], object]]] = {
    "data_dir": ("top", "data_dir", Path),
    "delta_arousal": ("detector", "delta_arousal", float),
    "delta_valence": ("detector", "delta_valence", float),
    "arousal_norm": ("detector", "arousal_norm", float),
    "jerk_threshold.urban": ("thresholds", "urban", float),
    "jerk_threshold.suburban": ("thresholds", "suburban", float),
    "jerk_threshold.highway": ("thresholds", "highway", float),
    "weight_mood_regulation": ("weights", "regulation_mood", float),
    "weight_mood_maintenance": ("weights", "maintenance_mood", float),
    "day_start": ("day_window", "start", _parse_time),
    "day_end": ("day_window", "end", _parse_time),
    "playlist_k": ("top", "playlist_k", int),
    "sim.track_count": ("top", "track_count", int),
    "sim.start_valence": ("top", "start_valence", float),
    "sim.start_arousal": ("top", "start_arousal", float),
    "sim.clock_start": ("top", "clock_start", _parse_time),
    "sim.scenario": ("top", "scenario", _parse_scenario),
    "sim.alpha": ("top", "alpha", float),
    "sim.noise_std": ("top", "noise_std", float),
    "sim.base_hr": ("top", "base_hr", float),
    "sim.base_rmssd": ("top", "base_rmssd", float),
    "sim.hr_gain": ("top", "hr_gain", float),
    "sim.rmssd_gain": ("top", "rmssd_gain", float),
    "sim.jerk_max": ("top", "jerk_max", float),
    "sim.bio_window": ("top", "bio_window", int),
    "sim.tel_samples": ("top", "tel_samples", int),
    "sim.tel_dt": ("top", "tel_dt", float),
    "sim.cruise_speed": ("top", "cruise_speed", float),
    "sim.step_seconds": ("top", "step_seconds", float),
}


def parse_config_lines(lines: Iterable[str], *, source: str | None = None) -> dict[str, str]:
    """Raw key -> value pairs from `key = value` lines; unknown keys rejected."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError("expected `key = value`", path=source, line=lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _KEYS:
            raise ParseError(f"unknown config key {key!r}", path=source, line=lineno)
        values[key] = value.strip()
    return values


def build_config(
    path: str | Path | None = None, overrides: Iterable[str] = ()
) -> AppConfig:
    """AppConfig from an optional file plus `key=value` override strings."""
    values: dict[str, str] = {}
    source = str(path) if path is not None else None
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            values.update(parse_config_lines(fh, source=source))
    for pair in overrides:
        key, sep, value = pair.partition("=")
        key = key.strip()
        if not sep or key not in _KEYS:
            raise DataError(f"bad override {pair!r}; expected known-key=value")
        values[key] = value.strip()

    groups: dict[str, dict[str, object]] = {
        "top": {}, "detector": {}, "thresholds": {}, "weights": {}, "day_window": {},
    }
    for key, raw in values.items():
        group, field_name, convert = _KEYS[key]
        try:
            groups[group][field_name] = convert(raw)
        except ValueError as exc:
            raise ParseError(f"bad value for {key}: {exc}", path=source) from None

    try:
        return AppConfig(
            detector=DetectorConfig(**groups["detector"]),
            thresholds=ScenarioThresholds(**groups["thresholds"]),
            weights=WeightConfig(**groups["weights"]),
            day_window=DayWindow(**groups["day_window"]),
            **groups["top"],
        )
    except ValueError as exc:
        raise ParseError(str(exc), path=source) from None


def config_keys() -> tuple[str, ...]:
    """All recognized config keys (for docs and error messages)."""
    return tuple(_KEYS)


def _unused_fields_guard() -> None:
    # Keep AppConfig and the key table in sync: every simple field should be
    # reachable from some key.
    covered = {spec[1] for spec in _KEYS.values() if spec[0] == "top"}
    simple = {
        f.name for f in fields(AppConfig)
        if f.name not in ("detector", "thresholds", "weights", "day_window")
    }
    assert covered == simple, simple ^ covered


_unused_fields_guard()
