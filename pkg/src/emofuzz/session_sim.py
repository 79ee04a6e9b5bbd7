"""Seeded synthetic audio/video emotion streams for three game archetypes.

A hidden per-second "true" emotion is redrawn from the archetype's base
weights with the archetype's switch probability each second.  The audio stream reports that emotion as a label;
the video stream reports a softened one-hot of it plus bounded noise.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from .emotions import EMOTIONS, Emotion, EmotionVector, from_label
from .timeline_io import TimelinePoint, write_audio_csv, write_video_csv

E = Emotion


@dataclass(frozen=True)
class Archetype:
    name: str
    weights: Mapping[Emotion, float]
    switch_prob: float
    noise: float
    # floor on the share of seconds held by the highest-weight emotion
    lead_share: float = 0.0
    # video peak height for the true emotion is drawn from this range
    peak_range: tuple[float, float] = (0.55, 0.9)

    def __post_init__(self):
        w = {Emotion.parse(k): float(v) for k, v in self.weights.items()}
        if any(x < 0 for x in w.values()) or sum(w.values()) <= 0:
            raise ValueError(f"{self.name}: weights must be non-negative with positive sum")
        if not 0.0 <= self.switch_prob <= 1.0:
            raise ValueError(f"{self.name}: switch_prob must lie in [0, 1]")
        if not 0.0 <= self.lead_share <= 1.0:
            raise ValueError(f"{self.name}: lead_share must lie in [0, 1]")
        if self.noise < 0:
            raise ValueError(f"{self.name}: noise must be non-negative")
        object.__setattr__(self, "weights", MappingProxyType(w))

    @property
    def lead(self) -> Emotion:
        return max(EMOTIONS, key=lambda e: (self.weights.get(e, 0.0), -EMOTIONS.index(e)))

    def probabilities(self) -> np.ndarray:
        p = np.array([self.weights.get(e, 0.0) for e in EMOTIONS])
        return p / p.sum()


ARCHETYPES: dict[str, Archetype] = {
    "fight": Archetype(
        "fight",
        {
            E.NEUTRAL: 0.36,
            E.HAPPY: 0.22,
            E.SAD: 0.16,
            E.FEAR: 0.14,
            E.ANGRY: 0.07,
            E.SURPRISE: 0.05,
        },
        switch_prob=0.45,
        noise=0.12,
        lead_share=0.40,
    ),
    "racing": Archetype(
        "racing",
        {E.SAD: 0.50, E.NEUTRAL: 0.30, E.FEAR: 0.12, E.HAPPY: 0.08},
        switch_prob=0.25,
        noise=0.08,
        lead_share=0.45,
    ),
    "logic": Archetype(
        "logic",
        {E.NEUTRAL: 0.80, E.SAD: 0.08, E.DISGUST: 0.06, E.ANGRY: 0.06},
        switch_prob=0.15,
        noise=0.05,
        lead_share=0.70,
    ),
}


def _rng(seed: int) -> np.random.Generator:
    seed = int(seed)
    return np.random.default_rng([abs(seed), int(seed < 0)])


def _true_sequence(arch: Archetype, duration: int, rng: np.random.Generator) -> np.ndarray:
    p = arch.probabilities()
    states = np.empty(duration, dtype=int)
    states[0] = rng.choice(len(EMOTIONS), p=p)
    # a switch redraws from the base weights, so their long-run shares match them
    for t in range(1, duration):
        if rng.random() < arch.switch_prob:
            states[t] = rng.choice(len(EMOTIONS), p=p)
        else:
            states[t] = states[t - 1]

    lead = EMOTIONS.index(arch.lead)
    need = math.ceil(arch.lead_share * duration) - int(np.sum(states == lead))
    if need > 0:
        others = np.flatnonzero(states != lead)
        states[rng.choice(others, size=need, replace=False)] = lead
    return states


def _video_vector(
    arch: Archetype, state: int, rng: np.random.Generator
) -> EmotionVector:
    p = arch.probabilities()
    peak = rng.uniform(*arch.peak_range)
    rest = p.copy()
    rest[state] = 0.0
    if rest.sum() > 0:
        rest = rest / rest.sum() * (1.0 - peak)
    v = rest
    v[state] = peak
    v = v + rng.uniform(-arch.noise, arch.noise, size=len(EMOTIONS))
    v = np.round(np.clip(v, 0.0, 1.0), 4)
    return EmotionVector.from_sequence(v.tolist())


def simulate_points(
    archetype: str | Archetype, duration_s: int, seed: int
) -> tuple[list[TimelinePoint], list[TimelinePoint]]:
    arch = archetype if isinstance(archetype, Archetype) else ARCHETYPES[archetype]
    if int(duration_s) != duration_s or duration_s < 2:
        raise ValueError(f"duration must be an integer >= 2, got {duration_s!r}")
    rng = _rng(seed)
    states = _true_sequence(arch, int(duration_s), rng)
    audio = [TimelinePoint(t, from_label(EMOTIONS[s])) for t, s in enumerate(states)]
    video = [TimelinePoint(t, _video_vector(arch, s, rng)) for t, s in enumerate(states)]
    return audio, video


def simulate(archetype: str | Archetype, duration_s: int, seed: int) -> tuple[bytes, bytes]:
    """Return ``(audio_csv, video_csv)`` bytes for one synthetic session."""
    if isinstance(archetype, str) and archetype not in ARCHETYPES:
        raise ValueError(f"unknown archetype {archetype!r}; choose from {sorted(ARCHETYPES)}")
    audio, video = simulate_points(archetype, duration_s, seed)
    return write_audio_csv(audio), write_video_csv(video)
