import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from algas3.numerics import CrispSample
from algas3.pmu import (
    FRAME,
    Channel,
    FrameStats,
    Pmu,
    PmuThresholds,
    VerdictCode,
    classify_frame,
    frame_stats,
    pmu_push,
    pmu_reset,
)

from oracles import pmu_reference

V = VerdictCode


def push_all(pmu, pairs):
    return [v for v in (pmu.push(r, l) for r, l in pairs) if v is not None]


def test_identical_channels_are_nominal():
    (v,) = push_all(Pmu(), [(1000, 1000)] * 16)
    assert v.code == V.NOMINAL and v.stats.mad == 0
    assert v.suspect is None


def test_constant_offset_is_divergent():
    (v,) = push_all(Pmu(), [(1000, 700)] * 16)
    assert v.stats.mad == 300 == pmu_reference([1000] * 16, [700] * 16)[0]
    assert v.code == V.DIVERGENT_UNKNOWN  # no previous frame to compare with


def test_incomplete_frame_has_no_verdict():
    p = Pmu()
    assert push_all(p, [(1000, 1000)] * 7) == []
    assert p.fill == 7


def test_typed_push_wrapper():
    p = Pmu()
    out = [pmu_push(p, CrispSample(5, 11), CrispSample(10, 11)) for _ in range(16)]
    assert out[:-1] == [None] * 15 and out[-1].stats.mad == 5


def test_quiet_frame_classification():
    assert classify_frame(FrameStats(0, 0, 0, 0, 0)).code == V.NOMINAL


def test_mad_at_threshold_is_nominal():
    assert classify_frame(FrameStats(64, 5000, 0, 0, 0)).code == V.NOMINAL
    assert classify_frame(FrameStats(65, 5000, 0, 0, 0)).code == V.ATTACK_RADAR


def test_one_sided_variance_is_an_attack():
    radar = [1000 + (3 if i % 2 else -3) for i in range(16)]
    lidar = [700 + (64 if i % 2 else -64) for i in range(16)]
    (v,) = push_all(Pmu(), zip(radar, lidar))
    assert (v.stats.mad, v.stats.var_radar, v.stats.var_lidar) == (300, 9, 4096)
    assert (v.stats.mad, v.stats.var_radar, v.stats.var_lidar) == pmu_reference(radar, lidar)
    assert v.code == V.ATTACK_LIDAR and v.code.is_attack
    assert v.suspect is Channel.LIDAR


def test_both_noisy_is_divergence_not_attack():
    radar = [1000 + (40 if i % 2 else -40) for i in range(16)]
    lidar = [700 + (64 if i % 2 else -64) for i in range(16)]
    (v,) = push_all(Pmu(), zip(radar, lidar))
    assert v.code == V.DIVERGENT_UNKNOWN


def test_mean_shift_names_the_moving_channel():
    p = Pmu()
    first = push_all(p, [(1000, 1000)] * 16)
    second = push_all(p, [(1000, 700)] * 16)
    assert first[0].code == V.NOMINAL
    assert second[0].code == V.DIVERGENT_LIDAR and second[0].code.is_divergent
    assert (second[0].stats.shift_radar, second[0].stats.shift_lidar) == (0, 16 * 300)
    p = Pmu()
    push_all(p, [(1000, 1000)] * 16)
    assert push_all(p, [(1400, 1000)] * 16)[0].code == V.DIVERGENT_RADAR


def test_equal_shift_is_unknown():
    p = Pmu()
    push_all(p, [(1000, 1000)] * 16)
    assert push_all(p, [(1100, 900)] * 16)[0].code == V.DIVERGENT_UNKNOWN


def test_reset_clears_history():
    p = Pmu()
    push_all(p, [(1000, 1000)] * 16)
    push_all(p, [(5, 5)] * 9)
    pmu_reset(p)
    assert p.fill == 0 and p.prev_sums is None
    (v,) = push_all(p, [(1000, 700)] * 16)
    assert v.code == V.DIVERGENT_UNKNOWN


def test_reset_mid_frame_discards_partial_samples():
    p = Pmu()
    push_all(p, [(2000, 0)] * 10)
    p.reset()
    (v,) = push_all(p, [(1000, 1000)] * 16)
    assert v.code == V.NOMINAL


def test_reset_state_matches_fresh_state():
    rng = np.random.default_rng(2)
    data = [tuple(x) for x in rng.integers(0, 2048, (80, 2)).tolist()]
    a, b = Pmu(), Pmu()
    push_all(a, [(1, 2000)] * 21)
    a.reset()
    assert push_all(a, data) == push_all(b, data)


def test_thresholds_must_be_positive():
    with pytest.raises(ValueError):
        PmuThresholds(0, 1024)


samples = st.lists(st.tuples(st.integers(0, 2047), st.integers(0, 2047)), max_size=120)


@settings(max_examples=100, deadline=None)
@given(samples)
def test_one_verdict_per_sixteen_samples(pairs):
    assert len(push_all(Pmu(), pairs)) == len(pairs) // FRAME


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 2047), min_size=16, max_size=16),
       st.lists(st.integers(0, 2047), min_size=16, max_size=16))
def test_stats_match_reference(radar, lidar):
    s = frame_stats(radar, lidar)
    assert (s.mad, s.var_radar, s.var_lidar) == pmu_reference(radar, lidar)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 200), st.integers(65, 900))
def test_detection_latency(onset, offset):
    # a persistent divergence is flagged by the first frame ending at or after onset + 16
    pairs = [(1000, 1000 - (offset if t >= onset else 0)) for t in range(onset + 48)]
    p = Pmu()
    for t, (r, l) in enumerate(pairs):
        v = p.push(r, l)
        if v is not None and v.code != V.NOMINAL:
            bound = -(-(onset + 16) // FRAME) * FRAME
            assert t + 1 <= bound
            assert t - onset <= 31
            return
    pytest.fail("divergence never detected")


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 40), min_size=16, max_size=16),
       st.integers(0, 600), st.integers(0, 600))
def test_larger_offset_never_turns_nominal(noise, a, b):
    lo, hi = sorted((a, b))
    radar = [1200 + n for n in noise]

    def verdict(offset):
        return classify_frame(frame_stats(radar, [1200 - offset] * 16)).code

    if verdict(lo) != V.NOMINAL:
        assert verdict(hi) != V.NOMINAL


@settings(max_examples=50, deadline=None)
@given(samples)
def test_replay_determinism(pairs):
    assert push_all(Pmu(), pairs) == push_all(Pmu(), pairs)
