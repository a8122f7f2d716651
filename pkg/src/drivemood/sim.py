"""Closed-loop drive-session simulator and open-loop trace replay.

The synthetic driver holds a valence/arousal state that relaxes toward the
centroid of whatever mood of music is playing (linear contraction with
optional Gaussian noise) and emits RR intervals and speed samples
consistent with that state.  Running the full recommendation loop against
this driver makes the regulation effect measurable: the report carries the
mood trajectory, played tracks, aggressive-driving fraction, and the step
at which the context target mood was first reached.

Replay runs the same detection and recommendation chain over recorded
biometric/telemetry windows from a trace file, with no driver model.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from datetime import datetime, time, timedelta
from typing import Callable, Iterable, Mapping

from .context import ActionMode, DayWindow, ShiftPlan, action_mode, day_phase, plan_shift, target_mood
from .errors import DataError, ParseError
from .hrv import (
    Baseline,
    DetectorConfig,
    HRVFeatures,
    MIN_CALIBRATION_WINDOWS,
    MIN_WINDOW_SAMPLES,
    RRSample,
    calibrate_baseline,
    compute_features,
    detect_mood,
)
from .model import (
    LevelPair,
    MoodLabel,
    MoodQuadrant,
    Track,
    UserProfile,
    ValenceArousal,
    centroid_of,
)
from .recommend import (
    FeedbackEvent,
    FeedbackKind,
    FusedMood,
    PlaylistPolicy,
    WeightConfig,
    apply_feedback,
    auto_select,
    fuse_mood,
    generate_playlist,
)
from .telemetry import (
    DriveScenario,
    ScenarioThresholds,
    SpeedSample,
    StyleFlag,
    classify_style,
    jerk_series,
)

Detector = Callable[[HRVFeatures, Baseline], "tuple[LevelPair, ValenceArousal]"]


@dataclass
class DriverModel:
    """Synthetic driver: mood state plus the constants tying it to signals.

    A seed is mandatory; unseeded simulation is rejected so that every run
    is reproducible.  step_driver returns a new model that shares this
    model's random generator, keeping the draw sequence continuous.
    """

    state: ValenceArousal
    seed: int
    alpha: float = 0.2        # inertia: fraction of the gap closed per played track
    noise_std: float = 0.0    # per-component Gaussian noise on each step
    base_hr: float = 60.0     # resting heart rate, bpm
    base_rmssd: float = 40.0  # resting RMSSD, ms
    hr_gain: float = 20.0     # bpm per unit arousal
    rmssd_gain: float = 0.5   # RMSSD fraction per unit valence
    jerk_max: float = 3.0     # m/s^3 at the angriest corner of the plane
    rng: random.Random = field(default=None, repr=False)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if not isinstance(self.seed, int):
            raise ValueError("driver model requires an integer seed")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.noise_std < 0:
            raise ValueError(f"noise_std must be >= 0, got {self.noise_std}")
        if self.base_hr <= 0 or self.base_rmssd <= 0:
            raise ValueError("base_hr and base_rmssd must be positive")
        if self.rng is None:
            self.rng = random.Random(self.seed)


def step_driver(model: DriverModel, played_quadrant: MoodQuadrant) -> DriverModel:
    """Advance the driver one played track toward the music's mood centroid.

    state' = clamp(state + alpha * (centroid - state) + noise).  With zero
    noise and alpha in (0, 1) the distance to the centroid strictly
    contracts by the factor (1 - alpha).
    """
    target = centroid_of(played_quadrant)
    noise_v = model.rng.gauss(0.0, model.noise_std) if model.noise_std > 0 else 0.0
    noise_a = model.rng.gauss(0.0, model.noise_std) if model.noise_std > 0 else 0.0
    new_state = ValenceArousal(
        valence=model.state.valence + model.alpha * (target.valence - model.state.valence) + noise_v,
        arousal=model.state.arousal + model.alpha * (target.arousal - model.state.arousal) + noise_a,
    )
    return replace(model, state=new_state)


def emit_biometrics(
    model: DriverModel, window_length: int, start_ms: float = 0.0
) -> list[RRSample]:
    """RR window whose features recover the state-implied HR and RMSSD.

    Two alternating RR values give closed-form control of both statistics:
    the mean fixes heart rate and every successive difference equals the
    RMSSD target.  Odd windows shift all samples by a constant so the mean
    stays exactly on target.
    """
    if window_length < MIN_WINDOW_SAMPLES:
        raise ValueError(f"window_length must be >= {MIN_WINDOW_SAMPLES}, got {window_length}")
    target_hr = model.base_hr + model.hr_gain * model.state.arousal
    target_rmssd = max(1.0, model.base_rmssd * (1.0 + model.rmssd_gain * model.state.valence))
    mean_rr = 60000.0 / target_hr
    half = target_rmssd / 2.0
    offset = half / window_length if window_length % 2 else 0.0
    samples = []
    t = start_ms
    for i in range(window_length):
        rr = mean_rr + (half if i % 2 == 0 else -half) - offset
        t += rr
        samples.append(RRSample(timestamp_ms=t, rr_ms=rr))
    return samples


def emit_telemetry(
    model: DriverModel,
    sample_count: int,
    dt: float,
    cruise_speed: float = 15.0,
    start_s: float = 0.0,
) -> list[SpeedSample]:
    """Speed series whose jerk magnitudes average the state-implied target.

    Aggression couples high arousal with negative valence: the target is
    jerk_max * max(0, arousal) * max(0, -valence).  Speeds alternate around
    the cruise speed with amplitude J*dt^2/4, which makes every interior
    second difference equal to J; zero-target states emit constant speed.
    """
    if sample_count < 3:
        raise ValueError(f"sample_count must be >= 3, got {sample_count}")
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    target = model.jerk_max * max(0.0, model.state.arousal) * max(0.0, -model.state.valence)
    amplitude = target * dt * dt / 4.0
    return [
        SpeedSample(
            timestamp_s=start_s + i * dt,
            speed_mps=cruise_speed + (amplitude if i % 2 == 0 else -amplitude),
        )
        for i in range(sample_count)
    ]


@dataclass(frozen=True)
class SimConfig:
    """Everything a closed-loop session needs besides catalog and profile."""

    seed: int
    track_count: int = 30
    start: ValenceArousal = ValenceArousal(0.0, 0.0)
    clock_start: time = time(12, 0)
    scenario: DriveScenario = DriveScenario.URBAN
    alpha: float = 0.2
    noise_std: float = 0.0
    base_hr: float = 60.0
    base_rmssd: float = 40.0
    hr_gain: float = 20.0
    rmssd_gain: float = 0.5
    jerk_max: float = 3.0
    bio_window: int = 30       # RR samples per detection window
    tel_samples: int = 31      # speed samples per cycle (30 s at 1 Hz)
    tel_dt: float = 1.0
    cruise_speed: float = 15.0
    step_seconds: float = 180.0  # session clock advance per played track
    detector: DetectorConfig = DetectorConfig()
    thresholds: ScenarioThresholds = ScenarioThresholds()
    weights: WeightConfig = WeightConfig()
    playlist_k: int = 10
    day_window: DayWindow = DayWindow()

    def __post_init__(self) -> None:
        if self.track_count < 1:
            raise ValueError(f"track_count must be >= 1, got {self.track_count}")
        if self.bio_window < MIN_WINDOW_SAMPLES:
            raise ValueError(f"bio_window must be >= {MIN_WINDOW_SAMPLES}")
        if self.tel_samples < 3:
            raise ValueError("tel_samples must be >= 3")
        if self.tel_dt <= 0 or self.step_seconds <= 0 or self.cruise_speed < 0:
            raise ValueError("tel_dt and step_seconds must be positive, cruise_speed >= 0")
        if self.playlist_k < 1:
            raise ValueError("playlist_k must be >= 1")


@dataclass(frozen=True)
class TrajectoryPoint:
    step: int
    state: ValenceArousal
    quadrant: MoodQuadrant


@dataclass(frozen=True)
class SessionReport:
    """Outcome of a session: mood path, plays, and driving-safety metrics."""

    trajectory: tuple[TrajectoryPoint, ...]
    played: tuple[str, ...]
    aggressive_fraction: float
    steps_to_target: int | None
    final_quadrant: MoodQuadrant
    style_flags: tuple[StyleFlag, ...]


def _local_time(clock_start: time, elapsed_s: float) -> time:
    anchor = datetime(2000, 1, 1, clock_start.hour, clock_start.minute, clock_start.second)
    return (anchor + timedelta(seconds=elapsed_s)).time()


def run_session(
    config: SimConfig,
    catalog: Mapping[str, Track],
    labels: Mapping[str, MoodLabel | None],
    profile: UserProfile,
    *,
    playlist_policy: PlaylistPolicy | None = None,
    detector: Detector | None = None,
) -> tuple[SessionReport, list[FeedbackEvent]]:
    """Run one closed-loop session of config.track_count played tracks.

    Each cycle: emit biometrics and telemetry from the driver state, detect
    mood and driving style, fuse them, plan the shift toward the context
    target, generate a playlist, auto-play its top track, and step the
    driver toward the played track's mood.  A final detection after the
    last track closes the trajectory (length track_count + 1).
    """
    if not catalog:
        raise DataError("catalog is empty")
    detect = detector or (lambda feats, base: detect_mood(feats, base, config.detector))
    baseline = profile.baseline or Baseline(hr=config.base_hr, rmssd=config.base_rmssd)
    model = DriverModel(
        state=config.start,
        seed=config.seed,
        alpha=config.alpha,
        noise_std=config.noise_std,
        base_hr=config.base_hr,
        base_rmssd=config.base_rmssd,
        hr_gain=config.hr_gain,
        rmssd_gain=config.rmssd_gain,
        jerk_max=config.jerk_max,
    )

    trajectory: list[TrajectoryPoint] = []
    flags: list[StyleFlag] = []
    played: list[str] = []
    events: list[FeedbackEvent] = []
    steps_to_target: int | None = None

    for step in range(config.track_count + 1):
        elapsed = step * config.step_seconds
        rr = emit_biometrics(model, config.bio_window, start_ms=elapsed * 1000.0)
        speeds = emit_telemetry(
            model, config.tel_samples, config.tel_dt,
            cruise_speed=config.cruise_speed, start_s=elapsed,
        )
        levels, _ = detect(compute_features(rr), baseline)
        style = classify_style(jerk_series(speeds), config.scenario, config.thresholds)
        fused = fuse_mood(levels, style)
        trajectory.append(TrajectoryPoint(step=step, state=model.state, quadrant=fused.quadrant))
        flags.append(style)

        now = _local_time(config.clock_start, elapsed)
        target = target_mood(day_phase(now, config.day_window))
        if steps_to_target is None and fused.quadrant is target:
            steps_to_target = step
        if step == config.track_count:
            break

        mode = action_mode(fused.quadrant, target)
        plan = plan_shift(fused.quadrant, target)
        if playlist_policy is not None:
            playlist = playlist_policy(catalog, labels, profile, fused, plan, mode)
        else:
            playlist = generate_playlist(
                catalog, labels, profile, plan, mode,
                weights=config.weights, k=config.playlist_k, created_at=elapsed,
            )
        track_id = auto_select(playlist)
        event = FeedbackEvent(
            user_id=profile.user_id, track_id=track_id,
            kind=FeedbackKind.PLAYED, timestamp=elapsed,
        )
        profile = apply_feedback(profile, event, catalog)
        events.append(event)
        played.append(track_id)

        label = labels.get(track_id)
        if label is not None:  # unlabeled music leaves the driver's mood alone
            model = step_driver(model, label.quadrant)

    report = SessionReport(
        trajectory=tuple(trajectory),
        played=tuple(played),
        aggressive_fraction=flags.count(StyleFlag.AGGRESSIVE) / len(flags),
        steps_to_target=steps_to_target,
        final_quadrant=trajectory[-1].quadrant,
        style_flags=tuple(flags),
    )
    return report, events


_FEEDBACK_KINDS = {k.value: k for k in FeedbackKind}
_SCENARIO_NAMES = {s.value: s for s in DriveScenario}


def replay_trace(
    lines: Iterable[str],
    config: SimConfig,
    catalog: Mapping[str, Track],
    labels: Mapping[str, MoodLabel | None],
    profile: UserProfile,
    *,
    source: str | None = None,
) -> tuple[SessionReport, UserProfile, list[FeedbackEvent]]:
    """Open-loop replay of a recorded session trace.

    Line format, one event per line:
      ``B,<timestamp_ms>,<rr_ms>``              biometric sample
      ``T,<timestamp_s>,<speed_mps>``           telemetry sample
      ``F,<timestamp>,<userId>,<trackId>,<kind>``  feedback event
      ``C,<HH:MM>,<scenario>``                  context marker

    A recommendation cycle fires whenever the biometric buffer reaches
    config.bio_window samples and the telemetry buffer holds at least
    config.tel_samples; leftover buffers big enough for one window flush
    into a final cycle at end of trace.  Without a stored baseline the
    first three feature windows are spent on cold-start calibration.
    """
    if not catalog:
        raise DataError("catalog is empty")

    rr_buf: list[RRSample] = []
    speed_buf: list[SpeedSample] = []
    calibration: list[HRVFeatures] = []
    baseline = profile.baseline
    clock = config.clock_start
    scenario = config.scenario

    trajectory: list[TrajectoryPoint] = []
    flags: list[StyleFlag] = []
    played: list[str] = []
    events: list[FeedbackEvent] = []
    steps_to_target: int | None = None

    def run_cycle() -> None:
        nonlocal profile, baseline, steps_to_target
        features = compute_features(rr_buf)
        if baseline is None:
            calibration.append(features)
            if len(calibration) >= MIN_CALIBRATION_WINDOWS:
                baseline = calibrate_baseline(calibration)
            rr_buf.clear()
            speed_buf.clear()
            return
        levels, point = detect_mood(features, baseline, config.detector)
        style = classify_style(jerk_series(speed_buf), scenario, config.thresholds)
        fused = fuse_mood(levels, style)
        step = len(trajectory)
        trajectory.append(TrajectoryPoint(step=step, state=point, quadrant=fused.quadrant))
        flags.append(style)
        target = target_mood(day_phase(clock, config.day_window))
        if steps_to_target is None and fused.quadrant is target:
            steps_to_target = step
        mode = action_mode(fused.quadrant, target)
        plan = plan_shift(fused.quadrant, target)
        playlist = generate_playlist(
            catalog, labels, profile, plan, mode,
            weights=config.weights, k=config.playlist_k, created_at=float(step),
        )
        track_id = auto_select(playlist)
        event = FeedbackEvent(
            user_id=profile.user_id, track_id=track_id,
            kind=FeedbackKind.PLAYED, timestamp=float(step),
        )
        profile = apply_feedback(profile, event, catalog)
        events.append(event)
        played.append(track_id)
        rr_buf.clear()
        speed_buf.clear()

    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        kind = parts[0]
        try:
            if kind == "B" and len(parts) == 3:
                rr_buf.append(RRSample(timestamp_ms=float(parts[1]), rr_ms=float(parts[2])))
            elif kind == "T" and len(parts) == 3:
                speed_buf.append(SpeedSample(timestamp_s=float(parts[1]), speed_mps=float(parts[2])))
            elif kind == "F" and len(parts) == 5:
                fb_kind = _FEEDBACK_KINDS.get(parts[4])
                if fb_kind is None:
                    raise ValueError(f"unknown feedback kind {parts[4]!r}")
                event = FeedbackEvent(
                    user_id=parts[2], track_id=parts[3],
                    kind=fb_kind, timestamp=float(parts[1]),
                )
                profile = apply_feedback(profile, event, catalog)
                events.append(event)
            elif kind == "C" and len(parts) == 3:
                clock = time.fromisoformat(parts[1])
                if parts[2] not in _SCENARIO_NAMES:
                    raise ValueError(f"unknown scenario {parts[2]!r}")
                scenario = _SCENARIO_NAMES[parts[2]]
            else:
                raise ValueError(f"unrecognized trace line {line!r}")
        except ValueError as exc:
            raise ParseError(str(exc), path=source, line=lineno) from None
        if len(rr_buf) >= config.bio_window and len(speed_buf) >= config.tel_samples:
            run_cycle()

    if len(rr_buf) >= MIN_WINDOW_SAMPLES and len(speed_buf) >= 3:
        run_cycle()

    if not trajectory:
        raise DataError(
            "trace produced no recommendation cycles "
            "(too few samples, or all windows went to cold-start calibration)"
        )

    if profile.baseline is None and baseline is not None:
        profile = replace(profile, baseline=baseline)

    report = SessionReport(
        trajectory=tuple(trajectory),
        played=tuple(played),
        aggressive_fraction=flags.count(StyleFlag.AGGRESSIVE) / len(flags),
        steps_to_target=steps_to_target,
        final_quadrant=trajectory[-1].quadrant,
        style_flags=tuple(flags),
    )
    return report, profile, events
