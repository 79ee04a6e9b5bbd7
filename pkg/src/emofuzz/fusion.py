"""Per-second, per-emotion fuzzy fusion of aligned audio and video scores."""

from __future__ import annotations

import io
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from .emotions import EMOTIONS, Emotion, EmotionVector
from .errors import EmptyAggregateError, FusionError
from .fuzzy_core import InferenceSystem
from .timeline_io import SessionTimeline

FUSED_HEADER = ("t", *(e.value for e in EMOTIONS))


@dataclass(frozen=True)
class FusedPoint:
    t: int
    intensity: Mapping[Emotion, float]

    def __post_init__(self):
        values = {Emotion.parse(k): float(x) for k, x in self.intensity.items()}
        if set(values) != set(EMOTIONS):
            raise ValueError(f"t={self.t}: all {len(EMOTIONS)} intensities are required")
        for e, x in values.items():
            if not (math.isfinite(x) and 0.0 <= x <= 100.0):
                raise ValueError(f"t={self.t}: {e} intensity {x!r} outside [0, 100]")
        object.__setattr__(
            self, "intensity", MappingProxyType({e: values[e] for e in EMOTIONS})
        )

    @property
    def scores(self) -> Mapping[Emotion, float]:
        return self.intensity

    def __eq__(self, other):
        if not isinstance(other, FusedPoint):
            return NotImplemented
        return self.t == other.t and dict(self.intensity) == dict(other.intensity)

    def __hash__(self):
        return hash((self.t, tuple(self.intensity.values())))


@dataclass(frozen=True)
class FusedTimeline:
    points: tuple[FusedPoint, ...]
    system_fingerprint: str

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        ts = [p.t for p in self.points]
        if any(a >= b for a, b in zip(ts, ts[1:])):
            raise ValueError("fused points must be sorted by strictly increasing t")

    @property
    def times(self) -> list[int]:
        return [p.t for p in self.points]

    def series(self, e: Emotion | str) -> list[float]:
        e = Emotion.parse(e)
        return [p.intensity[e] for p in self.points]

    def __len__(self) -> int:
        return len(self.points)


def fuse_timestep(
    system: InferenceSystem, audio_v: EmotionVector, video_v: EmotionVector
) -> dict[Emotion, float]:
    """Fuse each emotion independently from its audio and video scores (x100)."""
    return {e: system.fuse(100.0 * audio_v[e], 100.0 * video_v[e]) for e in EMOTIONS}


def fuse_session(system: InferenceSystem, s: SessionTimeline) -> FusedTimeline:
    if len(s) == 0:
        raise FusionError("session has no timesteps")
    audio = np.array([p.v.as_tuple() for p in s.audio]) * 100.0
    video = np.array([p.v.as_tuple() for p in s.video]) * 100.0
    try:
        fused = system.fuse_many(audio, video)
    except EmptyAggregateError:
        # locate the offending second with the scalar path for a useful message
        for pa, pv in zip(s.audio, s.video):
            try:
                fuse_timestep(system, pa.v, pv.v)
            except EmptyAggregateError as exc:
                raise FusionError(f"t={pa.t}: {exc}") from None
        raise
    # centroid is a convex combination of grid points; clip float dust only
    fused = np.clip(fused, 0.0, 100.0)
    points = tuple(
        FusedPoint(t, dict(zip(EMOTIONS, row.tolist()))) for t, row in zip(s.times, fused)
    )
    return FusedTimeline(points, system.fingerprint)


def write_fused_csv(f: FusedTimeline | Iterable[FusedPoint]) -> bytes:
    points = f.points if isinstance(f, FusedTimeline) else f
    buf = io.StringIO()
    buf.write(",".join(FUSED_HEADER) + "\n")
    for p in points:
        buf.write(",".join([str(p.t), *(f"{x:.2f}" for x in p.intensity.values())]) + "\n")
    return buf.getvalue().encode("utf-8")
