"""Fuzzy fusion of audio and video emotion streams with session analytics."""

from .analytics import (
    SessionReport,
    build_report,
    diversity,
    prevailing_emotion,
    series_stats,
    stability,
)
from .emotions import EMOTIONS, Emotion, EmotionVector, dominant, from_label, quadrant
from .fusion import FusedPoint, FusedTimeline, fuse_session, fuse_timestep
from .fuzzy_core import (
    FuzzyRule,
    FuzzyVariable,
    InferenceSystem,
    MembershipFunction,
    default_system,
    defuzzify_centroid,
    fuse_intensity,
    fuzzify,
    infer,
    load_system,
)
from .session_sim import simulate
from .timeline_io import (
    SessionTimeline,
    TimelinePoint,
    align,
    parse_audio_labels,
    parse_video_csv,
)

__all__ = [
    "EMOTIONS",
    "Emotion",
    "EmotionVector",
    "FusedPoint",
    "FusedTimeline",
    "FuzzyRule",
    "FuzzyVariable",
    "InferenceSystem",
    "MembershipFunction",
    "SessionReport",
    "SessionTimeline",
    "TimelinePoint",
    "align",
    "build_report",
    "default_system",
    "defuzzify_centroid",
    "diversity",
    "dominant",
    "from_label",
    "fuse_intensity",
    "fuse_session",
    "fuse_timestep",
    "fuzzify",
    "infer",
    "load_system",
    "parse_audio_labels",
    "parse_video_csv",
    "prevailing_emotion",
    "quadrant",
    "series_stats",
    "simulate",
    "stability",
]

__version__ = "0.1.0"
