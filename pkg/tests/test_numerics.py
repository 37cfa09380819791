import pytest
from hypothesis import given, strategies as st

from algas3.numerics import (
    CrispSample,
    FixedPointError,
    QCoeff,
    accumulator_bits,
    align_to_radar,
    q15,
    quantize,
    saturating_rescale,
)


@pytest.mark.parametrize("x, width, expected", [
    (0.0, 11, 0),
    (1.0, 11, 2047),
    (0.5, 10, 512),  # 511.5 rounds half up
])
def test_quantize_examples(x, width, expected):
    assert quantize(x, width) == CrispSample(expected, width)


@pytest.mark.parametrize("x", [-0.01, 1.0001, 2])
def test_quantize_rejects_out_of_range(x):
    with pytest.raises(FixedPointError):
        quantize(x, 11)


@pytest.mark.parametrize("acc, width, expected", [
    (2_237_440, 11, 68),
    (0, 11, 0),
    (2 ** 30, 10, 1023),
    (-1, 11, 0),
])
def test_saturating_rescale_examples(acc, width, expected):
    assert saturating_rescale(acc, 15, width).value == expected


def test_rescale_example_against_integer_arithmetic():
    acc = 1024 * 2185
    assert acc == 2_237_440
    assert saturating_rescale(acc, 15, 11).value == acc // 32768


def test_crisp_sample_bounds():
    CrispSample(2047, 11)
    with pytest.raises(FixedPointError):
        CrispSample(2048, 11)
    with pytest.raises(FixedPointError):
        CrispSample(-1, 10)


def test_q15_moving_average_coefficient():
    c = q15(1 / 15)
    assert c.raw == 2185
    assert abs(c.value - 1 / 15) / (1 / 15) < 2.2e-4
    with pytest.raises(FixedPointError):
        QCoeff(1 << 16)


def test_accumulator_headroom_covers_worst_case():
    bits = accumulator_bits(11)
    worst = 15 * 2185 * 2047
    assert worst < 1 << (bits - 1)


def test_align_doubles_lidar():
    assert align_to_radar(CrispSample(1023, 10)) == CrispSample(2046, 11)
    with pytest.raises(FixedPointError):
        align_to_radar(CrispSample(3, 11))


@given(st.floats(0, 1), st.sampled_from([10, 11]))
def test_quantize_stays_in_universe(x, width):
    assert 0 <= quantize(x, width).value <= (1 << width) - 1


@given(st.floats(0, 1), st.floats(0, 1), st.sampled_from([10, 11]))
def test_quantize_monotone(x, y, width):
    lo, hi = sorted((x, y))
    assert quantize(lo, width).value <= quantize(hi, width).value


@given(st.integers(-(1 << 40), 1 << 40), st.integers(-(1 << 40), 1 << 40),
       st.sampled_from([10, 11]))
def test_rescale_monotone_and_bounded(a, b, width):
    lo, hi = sorted((a, b))
    r_lo = saturating_rescale(lo, 15, width).value
    r_hi = saturating_rescale(hi, 15, width).value
    assert 0 <= r_lo <= r_hi <= (1 << width) - 1
