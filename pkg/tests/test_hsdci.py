import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from algas3 import hsdci
from algas3.hsdci import (
    ChecksumError,
    FrameError,
    HsdciFrame,
    decode_frame,
    diff_pair_check,
    encode_frame,
)
from algas3.numerics import CrispSample
from algas3.system import System, consensus_modes, system_step


def sensors(radar_values, lidar_values=None):
    lidar_values = lidar_values or [r // 2 for r in radar_values]
    return [(CrispSample(r, 11), CrispSample(v, 10)) for r, v in zip(radar_values, lidar_values)]


# -- frame codec ------------------------------------------------------------

def test_round_trip_example():
    f = HsdciFrame(3, 7, 1024, 0)
    wire = encode_frame(f)
    assert len(wire) == 8 and wire[0] == 0xA5
    assert decode_frame(wire) == f


def test_layout_is_big_endian_in_field_order():
    wire = encode_frame(HsdciFrame(1, 2, 3, 4))
    word = (1 << 46) | (2 << 14) | (3 << 3) | 4
    assert wire[1:7] == word.to_bytes(6, "big")
    assert wire[7] == (~sum(wire[:7])) & 0xFF


def test_distance_must_fit_eleven_bits():
    with pytest.raises(FrameError):
        HsdciFrame(0, 0, 2048, 0)
    with pytest.raises(FrameError):
        HsdciFrame(4, 0, 0, 0)


def test_wrong_length_rejected():
    with pytest.raises(FrameError):
        decode_frame(b"\xa5" * 7)


def test_every_single_byte_corruption_is_caught():
    wire = encode_frame(HsdciFrame(2, 0xDEADBEEF, 1500, 5))
    for i in range(8):
        for v in range(256):
            if v == wire[i]:
                continue
            bad = wire[:i] + bytes([v]) + wire[i + 1:]
            with pytest.raises(FrameError):
                decode_frame(bad)
    bad = bytearray(wire)
    bad[3] ^= 0x10
    with pytest.raises(ChecksumError):
        decode_frame(bytes(bad))


def test_bijection_over_corner_and_verdict():
    rng = np.random.default_rng(0)
    seen = set()
    for c, v in itertools.product(range(4), range(8)):
        for tick, dist in zip(rng.integers(0, 1 << 32, 20), rng.integers(0, 2048, 20)):
            f = HsdciFrame(c, int(tick), int(dist), v)
            wire = encode_frame(f)
            assert decode_frame(wire) == f
            seen.add(wire)
    assert len(seen) == 4 * 8 * 20


@settings(max_examples=300)
@given(st.integers(0, 3), st.integers(0, (1 << 32) - 1), st.integers(0, 2047),
       st.integers(0, 7))
def test_round_trip_property(c, tick, dist, verdict):
    f = HsdciFrame(c, tick, dist, verdict)
    assert decode_frame(encode_frame(f)) == f


# -- pair checks ------------------------------------------------------------

@pytest.mark.parametrize("a, b, delta, ok", [
    (500, 500, 0, True),
    (500, 560, 60, False),
    (500, 532, 32, True),
    (500, 533, 33, False),
])
def test_pair_check_examples(a, b, delta, ok):
    s = diff_pair_check(a, b, 32)
    assert (s.delta, s.within_margin, s.alarm) == (delta, ok, not ok)


@given(st.integers(0, 2047), st.integers(0, 2047), st.integers(1, 2047))
def test_pair_check_symmetry(a, b, m):
    assert diff_pair_check(a, b, m) == diff_pair_check(b, a, m)
    assert diff_pair_check(a, b, m).within_margin == (abs(a - b) <= m)


# -- system -----------------------------------------------------------------

def run_system(frames, **kw):
    with System(**kw) as s:
        return [system_step(s, f) for f in frames]


def test_level_corners_raise_no_alarm():
    outs = run_system([sensors([800] * 4)] * 40)
    for o in outs:
        assert not (o.pair_alarm or o.attack_alarm or o.divergence_alarm)
        assert [p.delta for p in o.pairs] == [0, 0]
    assert outs[-1].consensus == (("Landing-Mode", "on"),)


def test_tilt_trips_pair_zero_two():
    outs = run_system([sensors([800, 800, 860, 800])] * 40)
    last = outs[-1]
    p02, p13 = last.pairs
    assert (p02.label, p02.delta, p02.alarm) == ("0-2", 60, True)
    assert (p13.label, p13.delta, p13.alarm) == ("1-3", 0, False)
    assert last.pair_alarm and last.safety_alarm


def test_corrupted_frame_is_a_comm_fault():
    def tamper(tick, corner, wire):
        if tick == 5 and corner == 1:
            return wire[:4] + bytes([wire[4] ^ 0xFF]) + wire[5:]
        return wire

    outs = run_system([sensors([800] * 4)] * 10, tamper=tamper)
    bad = outs[5].pairs[1]
    assert bad.comm_fault and bad.alarm and bad.delta is None
    assert outs[5].pair_alarm
    assert not outs[4].pair_alarm and not outs[6].pair_alarm


def test_alarm_soundness_from_outputs():
    rng = np.random.default_rng(12)
    frames = [sensors(rng.integers(700, 900, 4).tolist()) for _ in range(60)]
    for o in run_system(frames):
        for p, (a, b) in zip(o.pairs, hsdci.PAIRS):
            assert p.delta == abs(o.corners[a].fused - o.corners[b].fused)
            assert p.alarm == (p.delta > 32)
        assert o.pair_alarm == any(p.alarm for p in o.pairs)


def test_parallel_matches_serial():
    rng = np.random.default_rng(5)
    frames = [sensors(rng.integers(0, 2048, 4).tolist(), rng.integers(0, 1024, 4).tolist())
              for _ in range(80)]
    assert run_system(frames) == run_system(frames, parallel=True)


def test_corner_order_does_not_matter():
    rng = np.random.default_rng(6)
    frames = [sensors(rng.integers(0, 2048, 4).tolist()) for _ in range(40)]
    ref = run_system(frames)
    s = System()
    for t, f in enumerate(frames):
        outs = {i: s.corners[i].step(*f[i]) for i in (3, 1, 0, 2)}
        assert tuple(outs[i] for i in range(4)) == ref[t].corners


def test_wrong_frame_size():
    with pytest.raises(ValueError):
        System().step(sensors([800] * 3))


@pytest.mark.parametrize("sets, expected", [
    ([{"A"}] * 4, (("A", "on"),)),
    ([{"A"}, {"A"}, set(), set()], (("A", "unsettled"),)),
    ([{"A"}, set(), set(), set()], (("A", "off"),)),
    ([set()] * 4, ()),
])
def test_consensus(sets, expected):
    assert consensus_modes([frozenset(s) for s in sets]) == expected
