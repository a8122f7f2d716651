"""Command-line interface wiring all modules together.

Commands:
  catalog ingest <file>                  validate and store a track catalog
  catalog classify --lexicon <file>      mood-label the stored catalog
  profile <userId> like|reset|show ...   manage a listener profile
  simulate --config F --seed N --out F   run a closed-loop drive session
  replay --trace F --user U --out F      replay a recorded session trace

Exit codes: 0 success, 1 usage, 2 data/parse error, 3 engine error.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from pathlib import Path

from . import storage
from .config import build_config
from .errors import DataError, DriveMoodError, ParseError
from .model import MoodQuadrant, UserProfile
from .sim import replay_trace, run_session
from .tags import classify_catalog, load_lexicon_file

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_ENGINE = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage problems as exit code 1."""

    def error(self, message: str):  # noqa: D102
        raise _UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="drivemood", description=__doc__.splitlines()[0])
    parser.add_argument(
        "--data-dir", type=Path, default=None,
        help="data directory (overrides the config file; default ./data)",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    catalog = sub.add_parser("catalog", help="catalog ingestion and classification")
    catalog_sub = catalog.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    ingest = catalog_sub.add_parser("ingest", help="ingest a JSONL track catalog")
    ingest.add_argument("file", type=Path)
    ingest.set_defaults(func=cmd_catalog_ingest)
    classify = catalog_sub.add_parser("classify", help="mood-label the stored catalog")
    classify.add_argument("--lexicon", type=Path, required=True)
    classify.set_defaults(func=cmd_catalog_classify)

    profile = sub.add_parser("profile", help="manage a listener profile")
    profile.add_argument("user_id")
    profile.add_argument("action", choices=["like", "reset", "show"])
    profile.add_argument("track_id", nargs="?")
    profile.set_defaults(func=cmd_profile)

    simulate = sub.add_parser("simulate", help="run a closed-loop drive session")
    simulate.add_argument("--config", type=Path, default=None)
    simulate.add_argument("--seed", type=int, required=True)
    simulate.add_argument("--out", type=Path, required=True)
    simulate.add_argument("--user", default="driver")
    simulate.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                          help="override a config value (repeatable)")
    simulate.set_defaults(func=cmd_simulate)

    replay = sub.add_parser("replay", help="replay a recorded session trace")
    replay.add_argument("--trace", type=Path, required=True)
    replay.add_argument("--user", required=True)
    replay.add_argument("--out", type=Path, required=True)
    replay.add_argument("--config", type=Path, default=None)
    replay.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    replay.set_defaults(func=cmd_replay)

    return parser


def _resolve_data_dir(args) -> Path:
    if args.data_dir is not None:
        return args.data_dir
    config = getattr(args, "_config", None)
    if config is not None:
        return config.data_dir
    return Path("data")


def cmd_catalog_ingest(args) -> int:
    data_dir = _resolve_data_dir(args)
    catalog = storage.read_catalog_file(args.file)
    with storage.data_lock(data_dir):
        storage.write_catalog(catalog, data_dir / storage.CATALOG_FILE)
    print(f"{len(catalog)} tracks ingested")
    return EXIT_OK


def cmd_catalog_classify(args) -> int:
    data_dir = _resolve_data_dir(args)
    catalog = storage.require_catalog(data_dir)
    lexicon = load_lexicon_file(args.lexicon)
    if len(lexicon) == 0:
        print("warning: lexicon has no entries; every track will be Unlabeled", file=sys.stderr)
    labels = classify_catalog(catalog.values(), lexicon)
    with storage.data_lock(data_dir):
        storage.write_labels(labels, data_dir / storage.LABELS_FILE)
    histogram = Counter(
        label.quadrant.value if label else "Unlabeled" for label in labels.values()
    )
    for name in [q.value for q in MoodQuadrant] + ["Unlabeled"]:
        print(f"{name}: {histogram.get(name, 0)}")
    print(f"{len(labels)} tracks classified")
    return EXIT_OK


def cmd_profile(args) -> int:
    data_dir = _resolve_data_dir(args)
    path = storage.profile_path(data_dir, args.user_id)
    profile = storage.load_or_new_profile(data_dir, args.user_id)

    if args.action == "show":
        print(f"user: {profile.user_id}")
        print(f"liked: {', '.join(sorted(profile.liked)) or '(none)'}")
        skips = ", ".join(f"{t}={n}" for t, n in sorted(profile.skips.items())) or "(none)"
        print(f"skips: {skips}")
        if profile.baseline:
            print(f"baseline: hr={profile.baseline.hr:g} bpm, rmssd={profile.baseline.rmssd:g} ms")
        else:
            print("baseline: (none)")
        return EXIT_OK

    if args.action == "like":
        if not args.track_id:
            raise _UsageError("profile like requires a trackId")
        catalog = storage.require_catalog(data_dir)
        if args.track_id not in catalog:
            raise DataError(f"unknown track id: {args.track_id!r}")
        from dataclasses import replace

        skips = {t: n for t, n in profile.skips.items() if t != args.track_id}
        profile = replace(profile, liked=profile.liked | {args.track_id}, skips=skips)
        message = f"liked {args.track_id}"
    else:  # reset
        profile = UserProfile(
            user_id=profile.user_id, name=profile.name,
            age=profile.age, profession=profile.profession,
            baseline=profile.baseline,
        )
        message = "profile reset"

    with storage.data_lock(data_dir):
        storage.write_profile(profile, path)
    print(message)
    return EXIT_OK


def _summary(report) -> str:
    steps = "never" if report.steps_to_target is None else str(report.steps_to_target)
    return (
        f"final_quadrant={report.final_quadrant.value} "
        f"steps_to_target={steps} "
        f"aggressive_fraction={report.aggressive_fraction:.6f}"
    )


def cmd_simulate(args) -> int:
    config = build_config(args.config, args.set)
    args._config = config
    data_dir = _resolve_data_dir(args)
    catalog = storage.require_catalog(data_dir)
    labels = storage.require_labels(data_dir)
    profile = storage.load_or_new_profile(data_dir, args.user)
    sim = config.sim_config(args.seed)
    with storage.data_lock(data_dir):
        report, events = run_session(sim, catalog, labels, profile)
        storage.append_feedback(data_dir / storage.FEEDBACK_FILE, events)
        storage.write_report(report, args.out)
    print(_summary(report))
    return EXIT_OK


def cmd_replay(args) -> int:
    config = build_config(args.config, args.set)
    args._config = config
    data_dir = _resolve_data_dir(args)
    catalog = storage.require_catalog(data_dir)
    labels = storage.require_labels(data_dir)
    profile = storage.load_or_new_profile(data_dir, args.user)
    sim = config.sim_config(seed=0)  # replay draws no randomness
    with storage.data_lock(data_dir):
        with open(args.trace, encoding="utf-8") as fh:
            report, profile, events = replay_trace(
                fh, sim, catalog, labels, profile, source=str(args.trace)
            )
        storage.write_profile(profile, storage.profile_path(data_dir, args.user))
        storage.append_feedback(data_dir / storage.FEEDBACK_FILE, events)
        storage.write_report(report, args.out)
    print(_summary(report))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, DataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (DriveMoodError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ENGINE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
