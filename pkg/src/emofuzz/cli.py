"""Command line entry point.

Exit codes: 0 success, 2 usage error, 3 parse error, 4 alignment error,
5 inference error.  Failures print one ``error: <module>: <detail>`` line
on stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .analytics import build_report
from .errors import EmofuzzError, ParseError
from .fusion import fuse_session, write_fused_csv
from .fuzzy_core import DEFAULT_GRID_RESOLUTION, InferenceSystem, default_system, load_system
from .session_sim import ARCHETYPES, simulate
from .timeline_io import align, parse_audio_labels, parse_video_csv

EXIT_OK = 0
EXIT_USAGE = 2


class UsageError(EmofuzzError):
    module = "cli"
    exit_code = EXIT_USAGE


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 2:
        raise argparse.ArgumentTypeError(f"must be >= 2, got {value}")
    return value


def _add_system_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--system", type=Path, help="system definition JSON")
    p.add_argument(
        "--rules",
        choices=("completed", "verbatim"),
        help="built-in rule base variant (default: completed)",
    )
    p.add_argument(
        "--grid-resolution",
        type=_positive_int,
        help=f"aggregation sample count (default: {DEFAULT_GRID_RESOLUTION})",
    )


def _add_stream_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--audio", type=Path, required=True, help="audio label CSV")
    p.add_argument("--video", type=Path, required=True, help="video score CSV")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--game", default="session", help="game name echoed into the report")
    p.add_argument("--participant", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="emofuzz", description="Fuzzy audio/video emotion fusion.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fuse", help="write the fused per-second intensity CSV")
    _add_stream_flags(p)
    _add_system_flags(p)

    p = sub.add_parser("report", help="write the session report JSON")
    _add_stream_flags(p)
    _add_system_flags(p)
    p.add_argument("--diversity", choices=("mean", "peak"), default="mean")

    p = sub.add_parser("eval", help="fuse a single audio/video intensity pair")
    p.add_argument("--audio-pct", type=float, required=True)
    p.add_argument("--video-pct", type=float, required=True)
    _add_system_flags(p)

    p = sub.add_parser("simulate", help="generate a synthetic session")
    p.add_argument("--archetype", choices=sorted(ARCHETYPES), required=True)
    p.add_argument("--duration", type=_positive_int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-audio", type=Path, required=True)
    p.add_argument("--out-video", type=Path, required=True)

    p = sub.add_parser("inspect-rules", help="print the system definition JSON")
    _add_system_flags(p)
    return parser


def _check_flags(args: argparse.Namespace) -> None:
    if getattr(args, "system", None) is not None and args.rules is not None:
        raise UsageError("--system and --rules are mutually exclusive")


def _system(args: argparse.Namespace) -> InferenceSystem:
    if args.system is not None:
        system = load_system(args.system)
    else:
        system = default_system(args.rules or "completed")
    if args.grid_resolution is not None:
        system = system.with_grid_resolution(args.grid_resolution)
    return system


def _read(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: Path, data: bytes) -> None:
    try:
        path.write_bytes(data)
    except OSError as exc:
        raise EmofuzzError(f"cannot write {path}: {exc.strerror}") from None


def _session(args: argparse.Namespace):
    audio = parse_audio_labels(_read(args.audio))
    video = parse_video_csv(_read(args.video))
    return align(audio, video, args.game, args.participant)


def cmd_fuse(args: argparse.Namespace) -> int:
    system = _system(args)
    fused = fuse_session(system, _session(args))
    _write(args.out, write_fused_csv(fused))
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    system = _system(args)
    session = _session(args)
    fused = fuse_session(system, session)
    report = build_report(session, fused, system, args.diversity)
    _write(args.out, report.to_json().encode("utf-8"))
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    value = _system(args).fuse(args.audio_pct, args.video_pct)
    print(f"{value:.2f}")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    audio, video = simulate(args.archetype, args.duration, args.seed)
    _write(args.out_audio, audio)
    _write(args.out_video, video)
    return EXIT_OK


def cmd_inspect_rules(args: argparse.Namespace) -> int:
    sys.stdout.write(_system(args).to_json())
    return EXIT_OK


COMMANDS = {
    "fuse": cmd_fuse,
    "report": cmd_report,
    "eval": cmd_eval,
    "simulate": cmd_simulate,
    "inspect-rules": cmd_inspect_rules,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _check_flags(args)
        return COMMANDS[args.command](args)
    except EmofuzzError as exc:
        print(f"error: {exc.module}: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        # out-of-domain numeric input that slipped past argparse, e.g. nan
        print(f"error: cli: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
