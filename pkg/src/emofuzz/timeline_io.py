"""Reading, writing and aligning per-second emotion streams.

Video streams are CSV score vectors (``t,angry,...,surprise``); audio streams
are CSV labels (``t,label[,confidence]``).  :func:`align` puts both on one
1 Hz grid over their overlapping window.
"""

from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .emotions import EMOTIONS, EmotionVector, dominant, from_label
from .errors import AlignmentError, EmotionParseError, ParseError

VIDEO_HEADER = ("t", *(e.value for e in EMOTIONS))
AUDIO_HEADER = ("t", "label")
AUDIO_HEADER_CONF = ("t", "label", "confidence")


@dataclass(frozen=True)
class TimelinePoint:
    t: int
    v: EmotionVector

    def __post_init__(self):
        if isinstance(self.t, bool) or int(self.t) != self.t or self.t < 0:
            raise ValueError(f"t must be a non-negative integer, got {self.t!r}")
        object.__setattr__(self, "t", int(self.t))

    @property
    def scores(self) -> EmotionVector:
        return self.v


@dataclass(frozen=True)
class SessionTimeline:
    audio: tuple[TimelinePoint, ...]
    video: tuple[TimelinePoint, ...]
    game: str = "session"
    participant: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "audio", tuple(self.audio))
        object.__setattr__(self, "video", tuple(self.video))
        if not self.audio or not self.video:
            raise AlignmentError("session streams must be non-empty")
        ta = [p.t for p in self.audio]
        if ta != [p.t for p in self.video]:
            raise AlignmentError("audio and video timestamps differ")
        if any(a >= b for a, b in zip(ta, ta[1:])):
            raise AlignmentError("timestamps must be strictly increasing")
        for p in self.audio + self.video:
            if not all(math.isfinite(x) for x in p.v.as_tuple()):
                raise AlignmentError(f"non-finite score at t={p.t}")

    @property
    def times(self) -> list[int]:
        return [p.t for p in self.audio]

    def __len__(self) -> int:
        return len(self.audio)


def _rows(data: bytes | str) -> list[list[str]]:
    text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    text = text.lstrip("﻿")
    rows = [[cell.strip() for cell in row] for row in csv.reader(io.StringIO(text))]
    return [r for r in rows if any(r)]


def _parse_t(cell: str, row: int) -> int:
    try:
        t = float(cell)
    except ValueError:
        raise ParseError(f"t is not a number: {cell!r}", row) from None
    if not math.isfinite(t) or t < 0 or t != int(t):
        raise ParseError(f"t must be a non-negative integer, got {cell!r}", row)
    return int(t)


def _parse_score(cell: str, name: str, row: int) -> float:
    try:
        x = float(cell)
    except ValueError:
        raise ParseError(f"{name} is not a number: {cell!r}", row) from None
    if not math.isfinite(x):
        raise ParseError(f"{name} is not finite: {cell!r}", row)
    return x


def parse_video_csv(
    data: bytes | str, diagnostics: list[str] | None = None
) -> list[TimelinePoint]:
    """Parse a video score stream.

    Out-of-range scores are clamped into [0, 1]; a message is appended to
    ``diagnostics`` for each clamped row when a list is supplied.
    """
    rows = _rows(data)
    if not rows:
        raise ParseError("no data rows")
    header = [h.lower() for h in rows[0]]
    missing = [c for c in VIDEO_HEADER if c not in header]
    if missing:
        raise ParseError(f"missing column(s): {', '.join(missing)}", 1)
    extra = [c for c in header if c not in VIDEO_HEADER]
    if extra:
        raise ParseError(f"unexpected column(s): {', '.join(extra)}", 1)
    if len(rows) == 1:
        raise ParseError("no data rows")
    col = {name: header.index(name) for name in VIDEO_HEADER}

    points, seen = [], set()
    for n, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} cells, got {len(row)}", n)
        t = _parse_t(row[col["t"]], n)
        if t in seen:
            raise ParseError(f"duplicate t={t}", n)
        seen.add(t)
        scores = {e: _parse_score(row[col[e.value]], e.value, n) for e in EMOTIONS}
        v = EmotionVector(scores)
        if v.clamped and diagnostics is not None:
            diagnostics.append(f"row {n}: scores clamped into [0, 1]")
        points.append(TimelinePoint(t, v))
    points.sort(key=lambda p: p.t)
    return points


def parse_audio_labels(
    data: bytes | str, diagnostics: list[str] | None = None
) -> list[TimelinePoint]:
    """Parse a per-second label stream into one-hot vectors."""
    rows = _rows(data)
    if not rows:
        raise ParseError("no data rows")
    header = tuple(h.lower() for h in rows[0])
    if header not in (AUDIO_HEADER, AUDIO_HEADER_CONF):
        raise ParseError(f"expected header t,label[,confidence], got {','.join(rows[0])}", 1)
    if len(rows) == 1:
        raise ParseError("no data rows")

    points, seen = [], set()
    for n, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} cells, got {len(row)}", n)
        t = _parse_t(row[0], n)
        if t in seen:
            raise ParseError(f"duplicate t={t}", n)
        seen.add(t)
        weight = 1.0
        if len(header) == 3 and row[2] != "":
            weight = _parse_score(row[2], "confidence", n)
            if not 0.0 <= weight <= 1.0:
                if diagnostics is not None:
                    diagnostics.append(f"row {n}: confidence clamped into [0, 1]")
                weight = min(max(weight, 0.0), 1.0)
        try:
            v = from_label(row[1], weight)
        except EmotionParseError as exc:
            raise ParseError(str(exc), n) from None
        points.append(TimelinePoint(t, v))
    points.sort(key=lambda p: p.t)
    return points


def _fmt(x: float) -> str:
    # shortest repr that round-trips exactly
    return repr(float(x))


def write_video_csv(points: Iterable[TimelinePoint]) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(VIDEO_HEADER)
    for p in points:
        w.writerow([p.t, *(_fmt(x) for x in p.v.as_tuple())])
    return buf.getvalue().encode("utf-8")


def write_audio_csv(points: Iterable[TimelinePoint]) -> bytes:
    """Serialise one-hot audio points; the confidence column is written only when needed."""
    points = list(points)
    labelled = []
    for p in points:
        e = dominant(p.v)
        weight = p.v[e]
        if any(x != 0.0 for other, x in p.v.items() if other != e):
            raise ValueError(f"t={p.t}: audio points must be one-hot")
        labelled.append((p.t, e, weight))
    with_conf = any(w != 1.0 for _, _, w in labelled)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(AUDIO_HEADER_CONF if with_conf else AUDIO_HEADER)
    for t, e, weight in labelled:
        w.writerow([t, e.value, _fmt(weight)] if with_conf else [t, e.value])
    return buf.getvalue().encode("utf-8")


def _per_second(points: Sequence[TimelinePoint]) -> dict[int, EmotionVector]:
    """Average points sharing a second, component-wise."""
    buckets: dict[int, list[tuple[float, ...]]] = defaultdict(list)
    for p in points:
        buckets[p.t].append(p.v.as_tuple())
    out = {}
    for t, vs in buckets.items():
        if len(vs) == 1:
            out[t] = EmotionVector.from_sequence(vs[0])
        else:
            out[t] = EmotionVector.from_sequence(sum(col) / len(vs) for col in zip(*vs))
    return out


def _carry_forward(by_t: dict[int, EmotionVector], lo: int, hi: int) -> list[TimelinePoint]:
    known = sorted(by_t)
    last = None
    for t in known:
        if t > lo:
            break
        last = by_t[t]
    out = []
    for t in range(lo, hi + 1):
        if t in by_t:
            last = by_t[t]
        out.append(TimelinePoint(t, last))
    return out


def align(
    audio: Sequence[TimelinePoint],
    video: Sequence[TimelinePoint],
    game: str = "session",
    participant: str | None = None,
) -> SessionTimeline:
    """Put both streams on a common 1 Hz grid over their overlap.

    Several points in the same second are averaged; a second with no
    observation repeats the stream's previous vector.
    """
    if not audio or not video:
        raise AlignmentError("both streams must be non-empty")
    a = _per_second(audio)
    v = _per_second(video)
    lo = max(min(a), min(v))
    hi = min(max(a), max(v))
    if lo > hi:
        raise AlignmentError(
            f"streams do not overlap (audio {min(a)}..{max(a)}, video {min(v)}..{max(v)})"
        )
    return SessionTimeline(
        tuple(_carry_forward(a, lo, hi)),
        tuple(_carry_forward(v, lo, hi)),
        game,
        participant,
    )
