"""Bounded fixed-point types shared by every processing block.

All buses are sized to what they carry: the radar channel is an 11-bit
unsigned distance, the lidar channel a 10-bit one.  Coefficients are Q1.15
and accumulators are plain Python ints (wide enough by construction).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

RADAR_WIDTH = 11
LIDAR_WIDTH = 10
SUPPORTED_WIDTHS = (LIDAR_WIDTH, RADAR_WIDTH)

COEFF_FRAC_BITS = 15
Q15_ONE = 1 << COEFF_FRAC_BITS

WEIGHT_FRAC_BITS = 7
Q7_ONE = 1 << WEIGHT_FRAC_BITS


class FixedPointError(ValueError):
    """A value does not fit the fixed-point format it was given."""


def full_scale(width: int) -> int:
    return (1 << width) - 1


@dataclass(frozen=True, slots=True)
class CrispSample:
    """Unsigned distance reading; one LSB is one distance quantum."""

    value: int
    width: int

    def __post_init__(self):
        if self.width < 1:
            raise FixedPointError(f"bad width {self.width}")
        if not 0 <= self.value <= full_scale(self.width):
            raise FixedPointError(
                f"value {self.value} outside {self.width}-bit universe")

    def __int__(self):
        return self.value


@dataclass(frozen=True, slots=True)
class QCoeff:
    raw: int
    frac_bits: int = COEFF_FRAC_BITS

    def __post_init__(self):
        if abs(self.raw) >= 1 << 16:
            raise FixedPointError(f"coefficient {self.raw} exceeds 16 bits")

    @property
    def value(self) -> float:
        return self.raw / (1 << self.frac_bits)


def q15(x) -> QCoeff:
    """Nearest Q1.15 coefficient, ties rounded up."""
    return QCoeff(math.floor(Fraction(x) * Q15_ONE + Fraction(1, 2)))


def accumulator_bits(width: int, taps: int = 15) -> int:
    """Signed accumulator width that cannot overflow over ``taps`` MACs."""
    return width + COEFF_FRAC_BITS + 1 + math.ceil(math.log2(taps)) + 1


def saturate(value: int, width: int) -> int:
    return min(max(value, 0), full_scale(width))


def quantize(real_value, width: int) -> CrispSample:
    """Map a ratio in [0, 1] onto the ``width``-bit universe (round half up)."""
    x = Fraction(real_value)
    if not 0 <= x <= 1:
        raise FixedPointError(f"ratio {real_value} outside [0, 1]")
    return CrispSample(math.floor(x * full_scale(width) + Fraction(1, 2)), width)


def saturating_rescale(acc: int, frac_bits: int, out_width: int) -> CrispSample:
    """Drop ``frac_bits`` (floor) and clamp into the output universe."""
    return CrispSample(saturate(acc >> frac_bits, out_width), out_width)


def div_round_half_up(num: int, den: int) -> int:
    """round(num / den) with ties toward +inf; ``den`` must be positive."""
    return (2 * num + den) // (2 * den)


def align_to_radar(sample: CrispSample) -> CrispSample:
    """Lift a 10-bit lidar reading into the 11-bit radar universe (x2)."""
    if sample.width != LIDAR_WIDTH:
        raise FixedPointError(f"expected a {LIDAR_WIDTH}-bit lidar sample")
    return CrispSample(sample.value << 1, RADAR_WIDTH)
