"""Emotion categories, arousal-valence quadrants and score vectors."""

from __future__ import annotations

import math
from collections.abc import Iterator, Mapping
from enum import Enum
from typing import Literal, NamedTuple

from .errors import EmotionParseError


class Emotion(str, Enum):
    """The seven categories in canonical (alphabetical) order."""

    ANGRY = "angry"
    DISGUST = "disgust"
    FEAR = "fear"
    HAPPY = "happy"
    NEUTRAL = "neutral"
    SAD = "sad"
    SURPRISE = "surprise"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, token: str | Emotion) -> Emotion:
        if isinstance(token, Emotion):
            return token
        key = str(token).strip().lower()
        key = _ALIASES.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise EmotionParseError(f"unknown emotion label {token!r}") from None


EMOTIONS: tuple[Emotion, ...] = tuple(Emotion)

# Speech classifiers emit "fearful"; it is accepted on input only.
_ALIASES = {"fearful": "fear"}


class QuadrantTag(NamedTuple):
    valence: Literal["negative", "neutral", "positive"]
    arousal: Literal["low", "neutral", "high"]


QUADRANTS: dict[Emotion, QuadrantTag] = {
    Emotion.HAPPY: QuadrantTag("positive", "high"),
    Emotion.SURPRISE: QuadrantTag("positive", "high"),
    Emotion.ANGRY: QuadrantTag("negative", "high"),
    Emotion.FEAR: QuadrantTag("negative", "high"),
    Emotion.SAD: QuadrantTag("negative", "low"),
    Emotion.DISGUST: QuadrantTag("negative", "low"),
    Emotion.NEUTRAL: QuadrantTag("neutral", "neutral"),
}

# Pairs that read alike in early perception. Informational only.
EARLY_PERCEPTION_GROUPS: tuple[frozenset[Emotion], ...] = (
    frozenset({Emotion.ANGRY, Emotion.DISGUST}),
    frozenset({Emotion.FEAR, Emotion.SURPRISE}),
    frozenset({Emotion.HAPPY}),
    frozenset({Emotion.SAD}),
)


def quadrant(e: Emotion | str) -> QuadrantTag:
    return QUADRANTS[Emotion.parse(e)]


class EmotionVector(Mapping):
    """Immutable per-emotion scores in [0, 1].

    Scores are independent (no sum-to-one constraint). Construction clamps
    out-of-range values; use :attr:`clamped` to see whether that happened.
    """

    __slots__ = ("_scores", "clamped")

    def __init__(self, scores: Mapping[Emotion | str, float] | None = None, **kw: float):
        values = dict.fromkeys(EMOTIONS, 0.0)
        clamped = False
        items = list((scores or {}).items()) + list(kw.items())
        for key, raw in items:
            e = Emotion.parse(key)
            x = float(raw)
            if not math.isfinite(x):
                raise ValueError(f"{e}: score must be finite, got {raw!r}")
            if x < 0.0 or x > 1.0:
                clamped = True
                x = min(max(x, 0.0), 1.0)
            values[e] = x
        self._scores = tuple(values[e] for e in EMOTIONS)
        self.clamped = clamped

    @classmethod
    def from_sequence(cls, values) -> EmotionVector:
        values = list(values)
        if len(values) != len(EMOTIONS):
            raise ValueError(f"expected {len(EMOTIONS)} scores, got {len(values)}")
        return cls(dict(zip(EMOTIONS, values)))

    def __getitem__(self, key: Emotion | str) -> float:
        return self._scores[EMOTIONS.index(Emotion.parse(key))]

    def __iter__(self) -> Iterator[Emotion]:
        return iter(EMOTIONS)

    def __len__(self) -> int:
        return len(EMOTIONS)

    def __eq__(self, other):
        if isinstance(other, EmotionVector):
            return self._scores == other._scores
        return super().__eq__(other)

    def __hash__(self):
        return hash(self._scores)

    def __repr__(self) -> str:
        body = ", ".join(f"{e.value}={x:g}" for e, x in zip(EMOTIONS, self._scores))
        return f"EmotionVector({body})"

    def as_tuple(self) -> tuple[float, ...]:
        return self._scores


def dominant(v: Mapping[Emotion | str, float]) -> Emotion:
    """Highest-scoring emotion; ties go to the earliest in canonical order."""
    scores = {Emotion.parse(k): float(x) for k, x in v.items()}
    best = max(scores.values())
    return next(e for e in EMOTIONS if scores.get(e) == best)


def from_label(label: str | Emotion, weight: float = 1.0) -> EmotionVector:
    e = Emotion.parse(label)
    if not 0.0 <= weight <= 1.0:
        raise ValueError(f"weight must lie in [0, 1], got {weight!r}")
    return EmotionVector({e: weight})
