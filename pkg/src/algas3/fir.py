"""15-tap moving-average FIR built from a coefficient store and AAC stages.

Two execution modes share the same arithmetic:

``functional``
    direct MAC over the zero-padded history; output at tick ``t`` covers the
    window ending at ``t``.

``timed``
    a systolic chain of Adder-and-Accumulate cells.  Inputs travel through two
    registers per cell while partial sums travel through one, so the output at
    tick ``t`` equals the functional output at ``t - 15``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .numerics import (
    COEFF_FRAC_BITS,
    SUPPORTED_WIDTHS,
    CrispSample,
    QCoeff,
    q15,
    saturating_rescale,
)

TAPS = 15
LATENCY = TAPS
GROUP_DELAY = (TAPS - 1) // 2
MODES = ("functional", "timed")

MOVING_AVERAGE_COEFF = q15(Fraction(1, TAPS))


class FirConfigError(ValueError):
    pass


class FirContractError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class FirOutput:
    sample: CrispSample
    valid_from_tick: int


class FirFilter:
    """One systolic moving-average filter for a single sensor channel."""

    def __init__(self, channel_width: int, mode: str = "functional",
                 coeffs: tuple[QCoeff, ...] | None = None):
        if channel_width not in SUPPORTED_WIDTHS:
            raise FirConfigError(f"unsupported channel width {channel_width}")
        if mode not in MODES:
            raise FirConfigError(f"unknown FIR mode {mode!r}")
        self.channel_width = channel_width
        self.mode = mode
        if coeffs is None:
            coeffs = (MOVING_AVERAGE_COEFF,) * TAPS
            if sum(c.raw for c in coeffs) != 32775:
                raise FirConfigError("moving-average coefficient store corrupt")
        self.coeffs = tuple(coeffs)
        self.taps = len(self.coeffs)
        self._raw = [c.raw for c in self.coeffs]
        self.reset()

    def reset(self):
        self.tick = 0
        self.delay_line = deque([0] * self.taps, maxlen=self.taps)
        # timed mode: per-cell partial sums plus the two-register input skew
        self.stage_regs = [0] * self.taps
        self._x_pipe = [0] * (2 * self.taps)

    @property
    def latency(self) -> int:
        return self.taps if self.mode == "timed" else 0

    def step(self, x: CrispSample) -> FirOutput:
        if x.width != self.channel_width:
            raise FirContractError(
                f"{x.width}-bit sample fed to {self.channel_width}-bit filter")
        if self.mode == "functional":
            acc = self._mac(x.value)
        else:
            acc = self._systolic(x.value)
        self.tick += 1
        return FirOutput(
            saturating_rescale(acc, COEFF_FRAC_BITS, self.channel_width),
            self.latency)

    def _mac(self, x: int) -> int:
        self.delay_line.appendleft(x)
        return sum(c * v for c, v in zip(self._raw, self.delay_line))

    def _systolic(self, x: int) -> int:
        # cell k reads x(t - 2k - 1) from the skew pipe and the partial sum
        # that cell k-1 latched last tick
        pipe, regs, c = self._x_pipe, self.stage_regs, self._raw
        new = [0] * self.taps
        new[0] = c[0] * pipe[0]
        for k in range(1, self.taps):
            new[k] = regs[k - 1] + c[k] * pipe[2 * k]
        self.stage_regs = new
        pipe.insert(0, x)
        pipe.pop()
        return new[-1]

    def run(self, samples) -> list[int]:
        """Step through an iterable of raw ints; returns the output values."""
        w = self.channel_width
        return [self.step(CrispSample(int(v), w)).sample.value for v in samples]


def fir_new(channel_width: int, mode: str = "functional") -> FirFilter:
    return FirFilter(channel_width, mode)


def fir_step(filt: FirFilter, x: CrispSample) -> FirOutput:
    return filt.step(x)


def fir_reset(filt: FirFilter) -> None:
    filt.reset()
