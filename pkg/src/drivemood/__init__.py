"""Mood-aware music recommendation for driving.

Tracks are mood-labeled from social tags, the driver's mood is read from
heart-rate variability against a personal baseline, driving style from
telemetry jerk, and playlists regulate or maintain the driver's mood.  A
closed-loop session simulator makes the regulation effect measurable.
"""

__version__ = "0.1.0"

from .context import (
    ActionMode,
    ContextSnapshot,
    DayPhase,
    DayWindow,
    ShiftPlan,
    action_mode,
    day_phase,
    plan_shift,
    target_mood,
)
from .hrv import (
    Baseline,
    DetectorConfig,
    HRVFeatures,
    RRSample,
    calibrate_baseline,
    compute_features,
    detect_mood,
)
from .model import (
    Level,
    LevelPair,
    MoodLabel,
    MoodQuadrant,
    Track,
    UserProfile,
    ValenceArousal,
    centroid_of,
    levels_of,
    levels_to_quadrant,
    quadrant_of,
    quadrant_to_levels,
)
from .recommend import (
    FeedbackEvent,
    FeedbackKind,
    FusedMood,
    Playlist,
    ScoredTrack,
    WeightConfig,
    apply_feedback,
    auto_select,
    fuse_mood,
    generate_playlist,
    preference,
    score_track,
)
from .sim import (
    DriverModel,
    SessionReport,
    SimConfig,
    TrajectoryPoint,
    emit_biometrics,
    emit_telemetry,
    replay_trace,
    run_session,
    step_driver,
)
from .tags import (
    ClusterScores,
    MoodLexicon,
    classify_catalog,
    classify_track,
    cluster_scores,
    default_lexicon,
    default_lexicon_path,
    load_lexicon,
    raw_scores,
)
from .telemetry import (
    DriveScenario,
    JerkEstimate,
    JerkEstimator,
    ScenarioThresholds,
    SpeedSample,
    StyleFlag,
    classify_style,
    estimate_acceleration,
    estimate_jerk,
    jerk_series,
)
