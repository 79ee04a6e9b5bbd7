import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emofuzz.emotions import EMOTIONS, Emotion, EmotionVector, from_label
from emofuzz.errors import FusionError
from emofuzz.fusion import FusedPoint, fuse_session, fuse_timestep, write_fused_csv
from emofuzz.fuzzy_core import default_system, fuse_intensity
from emofuzz.timeline_io import SessionTimeline, TimelinePoint, align

from oracles import right_triangle_centroid

SYSTEM = default_system()
LOW_ANCHOR = right_triangle_centroid(0, 25)  # fuse(0, 0)
HIGH_ANCHOR = 100 - LOW_ANCHOR  # fuse(100, 100)

vectors = st.lists(st.floats(0, 1), min_size=7, max_size=7).map(EmotionVector.from_sequence)


def _session(audio_vs, video_vs):
    a = tuple(TimelinePoint(t, v) for t, v in enumerate(audio_vs))
    v = tuple(TimelinePoint(t, v) for t, v in enumerate(video_vs))
    return SessionTimeline(a, v)


def test_timestep_worked_example():
    out = fuse_timestep(SYSTEM, EmotionVector(happy=0.12), EmotionVector(happy=0.85))
    assert out[Emotion.HAPPY] == pytest.approx(47.55, abs=5.0)


def test_timestep_all_zero():
    out = fuse_timestep(SYSTEM, EmotionVector(), EmotionVector())
    assert all(x == pytest.approx(LOW_ANCHOR, abs=0.05) for x in out.values())


def test_timestep_one_hot_sad():
    out = fuse_timestep(SYSTEM, from_label("sad"), from_label("sad"))
    assert out[Emotion.SAD] == pytest.approx(HIGH_ANCHOR, abs=0.05)
    others = [x for e, x in out.items() if e is not Emotion.SAD]
    assert others == pytest.approx([LOW_ANCHOR] * 6, abs=0.05)


def test_session_constant_neutral():
    s = _session([from_label("neutral")] * 10, [from_label("neutral")] * 10)
    f = fuse_session(SYSTEM, s)
    assert f.times == list(range(10))
    assert all(p.intensity[Emotion.NEUTRAL] == pytest.approx(HIGH_ANCHOR, abs=0.05) for p in f.points)
    assert f.system_fingerprint == SYSTEM.fingerprint


def test_session_matches_timestep_path():
    rng = np.random.default_rng(5)
    av = [EmotionVector.from_sequence(rng.uniform(0, 1, 7)) for _ in range(20)]
    vv = [EmotionVector.from_sequence(rng.uniform(0, 1, 7)) for _ in range(20)]
    f = fuse_session(SYSTEM, _session(av, vv))
    for p, a, v in zip(f.points, av, vv):
        expected = fuse_timestep(SYSTEM, a, v)
        assert [p.intensity[e] for e in EMOTIONS] == pytest.approx(
            [expected[e] for e in EMOTIONS], abs=1e-9
        )


def test_swapping_two_steps_swaps_outputs():
    rng = np.random.default_rng(8)
    av = [EmotionVector.from_sequence(rng.uniform(0, 1, 7)) for _ in range(6)]
    vv = [EmotionVector.from_sequence(rng.uniform(0, 1, 7)) for _ in range(6)]
    base = fuse_session(SYSTEM, _session(av, vv)).points
    av[1], av[4] = av[4], av[1]
    vv[1], vv[4] = vv[4], vv[1]
    swapped = fuse_session(SYSTEM, _session(av, vv)).points
    for i, j in enumerate([0, 4, 2, 3, 1, 5]):
        assert dict(swapped[i].intensity) == dict(base[j].intensity)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(vectors, vectors), min_size=3, max_size=8), st.data())
def test_pointwise_and_per_emotion_independence(pairs, data):
    s = _session([a for a, _ in pairs], [v for _, v in pairs])
    base = fuse_session(SYSTEM, s)
    k = data.draw(st.integers(0, len(pairs) - 1))
    e = data.draw(st.sampled_from(EMOTIONS))
    new = data.draw(st.floats(0, 1))
    audio = list(s.audio)
    scores = dict(audio[k].v)
    scores[e] = new
    audio[k] = TimelinePoint(k, EmotionVector(scores))
    mutated = fuse_session(SYSTEM, SessionTimeline(tuple(audio), s.video))
    for i, (p, q) in enumerate(zip(base.points, mutated.points)):
        for other in EMOTIONS:
            if i != k or other is not e:
                assert p.intensity[other] == q.intensity[other]
    assert mutated.points[k].intensity[e] == pytest.approx(
        fuse_intensity(SYSTEM, 100 * new, 100 * s.video[k].v[e]), abs=1e-9
    )


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(vectors, vectors), min_size=1, max_size=10))
def test_fused_bounds(pairs):
    f = fuse_session(SYSTEM, _session([a for a, _ in pairs], [v for _, v in pairs]))
    for p in f.points:
        assert all(0.0 <= x <= 100.0 for x in p.intensity.values())


def test_surface_monotone_within_tolerance():
    axis = np.linspace(0, 100, 21)
    a, v = np.meshgrid(axis, axis, indexing="ij")
    surf = SYSTEM.fuse_many(a, v)
    assert np.diff(surf, axis=0).min() >= -2.0
    assert np.diff(surf, axis=1).min() >= -2.0


def test_session_error_names_timestep():
    verbatim = default_system("verbatim")
    s = _session([EmotionVector(), from_label("happy")], [EmotionVector(), EmotionVector(happy=0.5)])
    with pytest.raises(FusionError, match="t=1"):
        fuse_session(verbatim, s)


def test_fused_point_validation():
    with pytest.raises(ValueError):
        FusedPoint(0, {e: 50.0 for e in EMOTIONS[:-1]})
    with pytest.raises(ValueError):
        FusedPoint(0, {e: 101.0 for e in EMOTIONS})


def test_fused_csv_format():
    s = align([TimelinePoint(0, from_label("sad"))], [TimelinePoint(0, from_label("sad"))])
    text = write_fused_csv(fuse_session(SYSTEM, s)).decode()
    header, row = text.splitlines()
    assert header == "t,angry,disgust,fear,happy,neutral,sad,surprise"
    cells = row.split(",")
    assert cells[0] == "0"
    assert all(len(c.split(".")[1]) == 2 for c in cells[1:])
    assert cells[6] == f"{fuse_intensity(SYSTEM, 100, 100):.2f}"
