"""Exit criteria for the package, one test (or group) per criterion.

Run ``pytest tests/test_acceptance.py`` for a PASS/FAIL line per criterion
in the terminal summary.
"""

import json
import random
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from emofuzz.analytics import diversity, series_stats, stability
from emofuzz.cli import main
from emofuzz.emotions import EMOTIONS, EmotionVector
from emofuzz.fusion import fuse_session
from emofuzz.fuzzy_core import (
    OUTPUT_LABELS,
    clip_and_aggregate,
    default_system,
    defuzzify_centroid,
    fuse_intensity,
    intensity_variable,
    overall_variable,
    rule_grid,
)
from emofuzz.session_sim import simulate
from emofuzz.timeline_io import (
    SessionTimeline,
    TimelinePoint,
    align,
    parse_audio_labels,
    parse_video_csv,
    write_audio_csv,
    write_video_csv,
)

from oracles import brute_centroid

SYSTEM = default_system()


def acceptance(number, title):
    return pytest.mark.acceptance(number, title)


@acceptance(1, "fusion anchor eval(12, 85) = 47.55 +/- 5.0 pp in < 1 s")
def test_fusion_anchor(capsys):
    start = time.perf_counter()
    code = main(["eval", "--audio-pct", "12", "--video-pct", "85"])
    elapsed = time.perf_counter() - start
    out = capsys.readouterr().out
    assert code == 0
    assert abs(float(out) - 47.55) <= 5.0
    assert elapsed < 1.0


@acceptance(2, "centroid at R=1001 within 0.5 pp of brute force at 10x on 100 aggregates in < 5 s")
def test_centroid_oracle():
    output = overall_variable()
    sets = {lbl: (mf.kind, mf.breakpoints) for lbl, mf in output.sets}
    rng = random.Random(20240)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        strengths = {lbl: rng.random() if rng.random() < 0.7 else 0.0 for lbl in OUTPUT_LABELS}
        if not any(strengths.values()):
            strengths[rng.choice(OUTPUT_LABELS)] = rng.random() + 1e-3
        got = defuzzify_centroid(clip_and_aggregate(output, strengths, 1001))
        want = brute_centroid(sets, strengths, 10 * 1001)
        worst = max(worst, abs(got - want))
    elapsed = time.perf_counter() - start
    assert worst < 0.5
    assert elapsed < 5.0


@acceptance(3, "prevailing audio emotion of the three published sequences via report")
@pytest.mark.parametrize("game, expected", [("fight", "sad"), ("racing", "sad"), ("logic", "neutral")])
def test_prevailing_sequences(capsys, fixtures_dir, tmp_path, game, expected):
    out = tmp_path / "report.json"
    code = main([
        "report",
        "--audio", str(fixtures_dir / f"{game}_audio.csv"),
        "--video", str(fixtures_dir / f"{game}_video.csv"),
        "--out", str(out),
        "--game", game,
    ])
    capsys.readouterr()
    assert code == 0
    assert json.loads(out.read_text())["prevailing"]["audio"] == expected


@acceptance(4, "five published frames: Happy mean 0.294 / median 0.04, Disgust all zero")
def test_table3_frames(fixtures_dir):
    frames = parse_video_csv((fixtures_dir / "table3_frames.csv").read_bytes())
    happy = series_stats([p.v["happy"] for p in frames])
    assert happy.mean == pytest.approx(0.294, abs=1e-9)
    assert happy.median == pytest.approx(0.04, abs=1e-9)
    assert series_stats([p.v["disgust"] for p in frames]) == (0.0, 0.0, 0.0, 0.0)


@acceptance(5, "rule grid exactly monotone; fused surface monotone within 2.0 pp on 21x21")
def test_monotonicity():
    grid = rule_grid(SYSTEM)
    idx = np.array([[OUTPUT_LABELS.index(cell[0]) for cell in row] for row in grid])
    assert all(len(cell) == 1 for row in grid for cell in row)
    assert (np.diff(idx, axis=0) >= 0).all() and (np.diff(idx, axis=1) >= 0).all()

    axis = np.linspace(0, 100, 21)
    surface = np.array([[fuse_intensity(SYSTEM, a, v) for v in axis] for a in axis])
    assert np.diff(surface, axis=0).min() >= -2.0
    assert np.diff(surface, axis=1).min() >= -2.0


def _pipeline(arch, seed):
    audio, video = simulate(arch, 600, seed)
    s = align(parse_audio_labels(audio), parse_video_csv(video), arch)
    f = fuse_session(SYSTEM, s)
    return stability(f), diversity(f, SYSTEM)


@acceptance(6, "fight vs logic over 10 seeds x 600 s: lower stability, >= diversity, < 30 s")
def test_archetype_contrast():
    start = time.perf_counter()
    for seed in range(10):
        fight_stab, fight_div = _pipeline("fight", seed)
        logic_stab, logic_div = _pipeline("logic", seed)
        assert fight_stab < logic_stab, seed
        assert fight_div >= logic_div, seed
    assert time.perf_counter() - start < 30.0


GRID = np.linspace(0, 100, 2001)


@acceptance(7, "invariant suites")
def test_membership_range_and_coverage():
    for var in (intensity_variable("audio"), overall_variable()):
        mus = np.array([mf(GRID) for _, mf in var.sets])
        assert mus.min() >= 0.0 and mus.max() <= 1.0
        assert mus.max(axis=0).min() > 0.0


@acceptance(7, "invariant suites")
def test_fused_bounds_and_independence():
    rng = np.random.default_rng(77)
    av = [EmotionVector.from_sequence(rng.uniform(0, 1, 7)) for _ in range(30)]
    vv = [EmotionVector.from_sequence(rng.uniform(0, 1, 7)) for _ in range(30)]
    session = SessionTimeline(
        tuple(TimelinePoint(t, v) for t, v in enumerate(av)),
        tuple(TimelinePoint(t, v) for t, v in enumerate(vv)),
    )
    base = fuse_session(SYSTEM, session)
    assert all(0.0 <= x <= 100.0 for p in base.points for x in p.intensity.values())

    k, e = 12, EMOTIONS[3]
    scores = dict(vv[k])
    scores[e] = 1.0 - scores[e]
    video = list(session.video)
    video[k] = TimelinePoint(k, EmotionVector(scores))
    mutated = fuse_session(SYSTEM, SessionTimeline(session.audio, tuple(video)))
    changed = [
        (p.t, em)
        for p, q in zip(base.points, mutated.points)
        for em in EMOTIONS
        if p.intensity[em] != q.intensity[em]
    ]
    assert set(changed) <= {(k, e)}


@acceptance(7, "invariant suites")
def test_concurrent_determinism():
    pairs = [(a, v) for a in range(0, 101, 5) for v in range(0, 101, 5)]
    serial = [fuse_intensity(SYSTEM, a, v) for a, v in pairs]
    with ThreadPoolExecutor(max_workers=8) as pool:
        threaded = list(pool.map(lambda p: fuse_intensity(SYSTEM, *p), pairs))
    assert threaded == serial


@acceptance(7, "invariant suites")
def test_parse_serialise_fixed_points(fixtures_dir):
    for game in ("fight", "racing", "logic"):
        audio = parse_audio_labels((fixtures_dir / f"{game}_audio.csv").read_bytes())
        video = parse_video_csv((fixtures_dir / f"{game}_video.csv").read_bytes())
        assert parse_audio_labels(write_audio_csv(audio)) == audio
        assert parse_video_csv(write_video_csv(video)) == video
        once = write_video_csv(video)
        assert write_video_csv(parse_video_csv(once)) == once
