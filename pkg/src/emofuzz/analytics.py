"""Session statistics, prevailing emotions, stability, diversity and the report."""

from __future__ import annotations

import json
import math
from collections import Counter
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Any, Literal, NamedTuple

from .emotions import EMOTIONS, Emotion, dominant
from .errors import AnalyticsError
from .fusion import FusedTimeline
from .fuzzy_core import InferenceSystem
from .timeline_io import SessionTimeline

# Largest population SD of a series bounded in [0, 100].
MAX_SD_PCT = 50.0


class SeriesStats(NamedTuple):
    mean: float
    median: float
    variance: float
    sd: float


def series_stats(values: Sequence[float]) -> SeriesStats:
    """Mean, median, population variance and SD of ``values``."""
    xs = [float(x) for x in values]
    n = len(xs)
    if n == 0:
        raise AnalyticsError("statistics of an empty series")
    mean = math.fsum(xs) / n
    ordered = sorted(xs)
    mid = n // 2
    median = ordered[mid] if n % 2 else (ordered[mid - 1] + ordered[mid]) / 2.0
    variance = math.fsum((x - mean) ** 2 for x in xs) / n
    return SeriesStats(mean, median, variance, math.sqrt(variance))


EmotionStats = dict[Emotion, SeriesStats]


def emotion_stats(series: Mapping[Emotion, Sequence[float]]) -> EmotionStats:
    return {e: series_stats(series[e]) for e in EMOTIONS}


def video_stats(s: SessionTimeline) -> EmotionStats:
    return emotion_stats({e: [p.v[e] for p in s.video] for e in EMOTIONS})


def fused_stats(f: FusedTimeline) -> EmotionStats:
    return emotion_stats({e: f.series(e) for e in EMOTIONS})


def prevailing_emotion(points: Sequence) -> Emotion:
    """Most frequent per-step dominant emotion; ties go to canonical order.

    Accepts timeline or fused points (anything with a ``scores`` mapping).
    """
    if not points:
        raise AnalyticsError("prevailing emotion of an empty timeline")
    counts = Counter(dominant(p.scores) for p in points)
    top = max(counts.values())
    return next(e for e in EMOTIONS if counts[e] == top)


def stability(f: FusedTimeline) -> float:
    """1 minus the mean per-emotion SD (in pp) scaled by 50, clamped to [0, 1]."""
    if len(f) < 2:
        raise AnalyticsError(f"stability needs at least 2 timesteps, got {len(f)}")
    mean_sd = math.fsum(series_stats(f.series(e)).sd for e in EMOTIONS) / len(EMOTIONS)
    return min(max(1.0 - mean_sd / MAX_SD_PCT, 0.0), 1.0)


DiversityMode = Literal["mean", "peak"]
_COUNTED = ("Medium", "High")


def _argmax_label(degrees: Mapping[str, float]) -> str:
    # later labels win ties, i.e. ties resolve toward the higher set
    best = max(degrees.values())
    return [lbl for lbl, d in degrees.items() if d == best][-1]


def diversity(
    f: FusedTimeline, system: InferenceSystem, mode: DiversityMode = "mean"
) -> int:
    """Number of emotions whose session intensity reads as Medium or High.

    The session intensity of an emotion is the mean (or, with
    ``mode="peak"``, the maximum) of its fused series, fuzzified against
    the system's input intensity variable.
    """
    if len(f) == 0:
        raise AnalyticsError("diversity of an empty timeline")
    if mode not in ("mean", "peak"):
        raise AnalyticsError(f"unknown diversity mode {mode!r}")
    var = system.inputs[0]
    count = 0
    for e in EMOTIONS:
        series = f.series(e)
        level = max(series) if mode == "peak" else math.fsum(series) / len(series)
        if _argmax_label(var.fuzzify(level)) in _COUNTED:
            count += 1
    return count


@dataclass(frozen=True)
class SessionReport:
    game: str
    participant: str | None
    prevailing_audio: Emotion
    prevailing_video: Emotion
    prevailing_fused: Emotion
    stats_video: EmotionStats
    stats_fused: EmotionStats
    stability: float
    diversity: int
    system_fingerprint: str

    def to_dict(self) -> dict[str, Any]:
        def table(stats: EmotionStats) -> dict[str, dict[str, float]]:
            return {e.value: dict(stats[e]._asdict()) for e in EMOTIONS}

        return {
            "game": self.game,
            "participant": self.participant,
            "prevailing": {
                "audio": self.prevailing_audio.value,
                "video": self.prevailing_video.value,
                "fused": self.prevailing_fused.value,
            },
            "stats_video": table(self.stats_video),
            "stats_fused": table(self.stats_fused),
            "stability": self.stability,
            "diversity": self.diversity,
            "system_fingerprint": self.system_fingerprint,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> SessionReport:
        def table(d: Mapping[str, Mapping[str, float]]) -> EmotionStats:
            return {Emotion.parse(k): SeriesStats(**v) for k, v in d.items()}

        prev = doc["prevailing"]
        return cls(
            game=doc["game"],
            participant=doc.get("participant"),
            prevailing_audio=Emotion.parse(prev["audio"]),
            prevailing_video=Emotion.parse(prev["video"]),
            prevailing_fused=Emotion.parse(prev["fused"]),
            stats_video=table(doc["stats_video"]),
            stats_fused=table(doc["stats_fused"]),
            stability=float(doc["stability"]),
            diversity=int(doc["diversity"]),
            system_fingerprint=doc["system_fingerprint"],
        )

    @classmethod
    def from_json(cls, text: str) -> SessionReport:
        return cls.from_dict(json.loads(text))


def build_report(
    s: SessionTimeline,
    f: FusedTimeline,
    system: InferenceSystem,
    diversity_mode: DiversityMode = "mean",
) -> SessionReport:
    if s.times != f.times:
        raise AnalyticsError("session and fused timeline timestamps differ")
    return SessionReport(
        game=s.game,
        participant=s.participant,
        prevailing_audio=prevailing_emotion(s.audio),
        prevailing_video=prevailing_emotion(s.video),
        prevailing_fused=prevailing_emotion(f.points),
        stats_video=video_stats(s),
        stats_fused=fused_stats(f),
        stability=stability(f),
        diversity=diversity(f, system, diversity_mode),
        system_fingerprint=f.system_fingerprint,
    )


_STATS_TABLE = {
    "type": "object",
    "required": [e.value for e in EMOTIONS],
    "additionalProperties": False,
    "properties": {
        e.value: {
            "type": "object",
            "required": ["mean", "median", "variance", "sd"],
            "additionalProperties": False,
            "properties": {
                "mean": {"type": "number"},
                "median": {"type": "number"},
                "variance": {"type": "number", "minimum": 0},
                "sd": {"type": "number", "minimum": 0},
            },
        }
        for e in EMOTIONS
    },
}

_EMOTION_NAME = {"type": "string", "enum": [e.value for e in EMOTIONS]}

REPORT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Session emotion report",
    "type": "object",
    "required": [
        "game",
        "prevailing",
        "stats_video",
        "stats_fused",
        "stability",
        "diversity",
        "system_fingerprint",
    ],
    "additionalProperties": False,
    "properties": {
        "game": {"type": "string"},
        "participant": {"type": ["string", "null"]},
        "prevailing": {
            "type": "object",
            "required": ["audio", "video", "fused"],
            "additionalProperties": False,
            "properties": {k: _EMOTION_NAME for k in ("audio", "video", "fused")},
        },
        "stats_video": _STATS_TABLE,
        "stats_fused": _STATS_TABLE,
        "stability": {"type": "number", "minimum": 0, "maximum": 1},
        "diversity": {"type": "integer", "minimum": 0, "maximum": len(EMOTIONS)},
        "system_fingerprint": {"type": "string"},
    },
}
