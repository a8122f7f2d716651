"""File persistence: catalog, labels, profiles, feedback log, and reports.

Everything is line-delimited or plain JSON, human-inspectable, and written
deterministically (sorted keys, sorted records) so reruns are byte-stable.
"""

from __future__ import annotations

import json
import os
from contextlib import contextmanager
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .errors import DataError, LockError, ParseError
from .hrv import Baseline
from .model import MoodLabel, MoodQuadrant, Track, UserProfile
from .recommend import FeedbackEvent
from .sim import SessionReport

CATALOG_FILE = "catalog.jsonl"
LABELS_FILE = "labels.jsonl"
FEEDBACK_FILE = "feedback.log"
PROFILES_DIR = "profiles"

_CATALOG_FIELDS = {"id", "title", "artist", "genre", "tags"}


def parse_catalog_lines(lines: Iterable[str], *, source: str | None = None) -> dict[str, Track]:
    """Catalog from JSON-per-line records with fields id/title/artist/genre/tags."""
    catalog: dict[str, Track] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON: {exc.msg}", path=source, line=lineno) from None
        if not isinstance(record, dict):
            raise ParseError("record must be a JSON object", path=source, line=lineno)
        missing = _CATALOG_FIELDS - record.keys()
        extra = record.keys() - _CATALOG_FIELDS
        if missing:
            raise ParseError(f"missing fields: {', '.join(sorted(missing))}", path=source, line=lineno)
        if extra:
            raise ParseError(f"unknown fields: {', '.join(sorted(extra))}", path=source, line=lineno)
        for name in ("id", "title", "artist", "genre"):
            if not isinstance(record[name], str):
                raise ParseError(f"field {name!r} must be a string", path=source, line=lineno)
        if not isinstance(record["tags"], dict):
            raise ParseError("field 'tags' must be a tag -> count object", path=source, line=lineno)
        try:
            track = Track(
                track_id=record["id"],
                title=record["title"],
                artist=record["artist"],
                genre=record["genre"],
                tags=record["tags"],
            )
        except ValueError as exc:
            raise ParseError(str(exc), path=source, line=lineno) from None
        if track.track_id in catalog:
            raise ParseError(f"duplicate track id: {track.track_id!r}", path=source, line=lineno)
        catalog[track.track_id] = track
    return catalog


def read_catalog_file(path: Path) -> dict[str, Track]:
    with open(path, encoding="utf-8") as fh:
        return parse_catalog_lines(fh, source=str(path))


def write_catalog(catalog: Mapping[str, Track], path: Path) -> None:
    lines = []
    for track_id in sorted(catalog):
        track = catalog[track_id]
        lines.append(json.dumps(
            {
                "id": track.track_id,
                "title": track.title,
                "artist": track.artist,
                "genre": track.genre,
                "tags": dict(track.tags),
            },
            sort_keys=True,
        ))
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def write_labels(labels: Mapping[str, MoodLabel | None], path: Path) -> None:
    lines = []
    for track_id in sorted(labels):
        label = labels[track_id]
        record = {
            "id": track_id,
            "quadrant": label.quadrant.value if label else None,
            "confidence": label.confidence if label else None,
        }
        lines.append(json.dumps(record, sort_keys=True))
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def read_labels_file(path: Path) -> dict[str, MoodLabel | None]:
    labels: dict[str, MoodLabel | None] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
                if record["quadrant"] is None:
                    labels[record["id"]] = None
                else:
                    labels[record["id"]] = MoodLabel(
                        quadrant=MoodQuadrant(record["quadrant"]),
                        confidence=record["confidence"],
                    )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"bad label record: {exc}", path=str(path), line=lineno) from None
    return labels


def profile_path(data_dir: Path, user_id: str) -> Path:
    return data_dir / PROFILES_DIR / f"{user_id}.json"


def write_profile(profile: UserProfile, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    record = {
        "user_id": profile.user_id,
        "name": profile.name,
        "age": profile.age,
        "profession": profile.profession,
        "liked": sorted(profile.liked),
        "skips": dict(sorted(profile.skips.items())),
        "baseline": (
            {"hr": profile.baseline.hr, "rmssd": profile.baseline.rmssd}
            if profile.baseline else None
        ),
    }
    path.write_text(json.dumps(record, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def read_profile_file(path: Path) -> UserProfile:
    try:
        record = json.loads(path.read_text(encoding="utf-8"))
        baseline = record.get("baseline")
        return UserProfile(
            user_id=record["user_id"],
            name=record.get("name"),
            age=record.get("age"),
            profession=record.get("profession"),
            liked=frozenset(record.get("liked", ())),
            skips={t: int(n) for t, n in record.get("skips", {}).items()},
            baseline=Baseline(hr=baseline["hr"], rmssd=baseline["rmssd"]) if baseline else None,
        )
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad profile file: {exc}", path=str(path)) from None


def load_or_new_profile(data_dir: Path, user_id: str) -> UserProfile:
    path = profile_path(data_dir, user_id)
    if path.exists():
        return read_profile_file(path)
    return UserProfile(user_id=user_id)


def append_feedback(path: Path, events: Iterable[FeedbackEvent]) -> None:
    """Append-only rows `timestamp,userId,trackId,kind`."""
    with open(path, "a", encoding="utf-8") as fh:
        for event in events:
            fh.write(f"{event.timestamp},{event.user_id},{event.track_id},{event.kind.value}\n")


def report_to_dict(report: SessionReport) -> dict:
    return {
        "final_quadrant": report.final_quadrant.value,
        "steps_to_target": report.steps_to_target,
        "aggressive_fraction": report.aggressive_fraction,
        "played_tracks": list(report.played),
        "style_flags": [flag.value for flag in report.style_flags],
        "trajectory": [
            [point.step, point.state.valence, point.state.arousal, point.quadrant.value]
            for point in report.trajectory
        ],
    }


def write_report(report: SessionReport, path: Path) -> None:
    path.write_text(
        json.dumps(report_to_dict(report), sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )


@contextmanager
def data_lock(data_dir: Path) -> Iterator[None]:
    """Single-writer lock for mutating commands against one data directory."""
    data_dir.mkdir(parents=True, exist_ok=True)
    lock = data_dir / ".lock"
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise LockError(f"data directory is locked by another command ({lock})") from None
    try:
        os.write(fd, f"{os.getpid()}\n".encode())
        yield
    finally:
        os.close(fd)
        lock.unlink(missing_ok=True)


def require_catalog(data_dir: Path) -> dict[str, Track]:
    path = data_dir / CATALOG_FILE
    if not path.exists():
        raise DataError(f"no catalog at {path}; run `drivemood catalog ingest <file>` first")
    return read_catalog_file(path)


def require_labels(data_dir: Path) -> dict[str, MoodLabel | None]:
    path = data_dir / LABELS_FILE
    if not path.exists():
        raise DataError(
            f"no labels at {path}; run `drivemood catalog classify --lexicon <file>` first"
        )
    return read_labels_file(path)
