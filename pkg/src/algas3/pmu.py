"""Prognostic Malfunction Unit.

Watches the two filtered channels (lidar already lifted to the 11-bit radar
universe) over tumbling 16-sample frames.  Each completed frame is classified
as nominal, a divergence with a suspect channel, or a suspected spectrum
attack on one band.

Frame statistics use exact integer sums with truncating division:

* mean absolute difference ``sum|r - l| // 16``
* variance ``(16 * sum(x^2) - sum(x)^2) // 256`` (exact mean, then floor)
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .numerics import CrispSample

FRAME = 16


class Channel(enum.Enum):
    RADAR = "radar"
    LIDAR = "lidar"
    UNKNOWN = "unknown"


class VerdictCode(enum.IntEnum):
    NOMINAL = 0
    DIVERGENT_RADAR = 1
    DIVERGENT_LIDAR = 2
    DIVERGENT_UNKNOWN = 3
    ATTACK_RADAR = 4
    ATTACK_LIDAR = 5

    @property
    def is_attack(self) -> bool:
        return self in (VerdictCode.ATTACK_RADAR, VerdictCode.ATTACK_LIDAR)

    @property
    def is_divergent(self) -> bool:
        return self in (VerdictCode.DIVERGENT_RADAR, VerdictCode.DIVERGENT_LIDAR,
                        VerdictCode.DIVERGENT_UNKNOWN)


@dataclass(frozen=True)
class PmuThresholds:
    divergence: int = 64  # LSB
    variance: int = 1024  # LSB^2

    def __post_init__(self):
        if self.divergence <= 0 or self.variance <= 0:
            raise ValueError("PMU thresholds must be positive")


@dataclass(frozen=True)
class FrameStats:
    mad: int
    var_radar: int
    var_lidar: int
    sum_radar: int
    sum_lidar: int
    # |sum this frame - sum previous frame|; None on the first frame
    shift_radar: int | None = None
    shift_lidar: int | None = None


@dataclass(frozen=True)
class PmuVerdict:
    code: VerdictCode
    stats: FrameStats

    @property
    def suspect(self) -> Channel | None:
        return {
            VerdictCode.DIVERGENT_RADAR: Channel.RADAR,
            VerdictCode.DIVERGENT_LIDAR: Channel.LIDAR,
            VerdictCode.DIVERGENT_UNKNOWN: Channel.UNKNOWN,
            VerdictCode.ATTACK_RADAR: Channel.RADAR,
            VerdictCode.ATTACK_LIDAR: Channel.LIDAR,
        }.get(self.code)


def frame_stats(radar, lidar, prev_sums=None) -> FrameStats:
    n = len(radar)
    sr, sl = sum(radar), sum(lidar)
    mad = sum(abs(r - l) for r, l in zip(radar, lidar)) // n
    var_r = (n * sum(r * r for r in radar) - sr * sr) // (n * n)
    var_l = (n * sum(v * v for v in lidar) - sl * sl) // (n * n)
    if prev_sums is None:
        return FrameStats(mad, var_r, var_l, sr, sl)
    return FrameStats(mad, var_r, var_l, sr, sl,
                      abs(sr - prev_sums[0]), abs(sl - prev_sums[1]))


def classify_frame(stats: FrameStats, thresholds: PmuThresholds = PmuThresholds()
                   ) -> PmuVerdict:
    if stats.mad <= thresholds.divergence:
        return PmuVerdict(VerdictCode.NOMINAL, stats)
    noisy_r = stats.var_radar > thresholds.variance
    noisy_l = stats.var_lidar > thresholds.variance
    if noisy_r != noisy_l:
        code = VerdictCode.ATTACK_RADAR if noisy_r else VerdictCode.ATTACK_LIDAR
        return PmuVerdict(code, stats)
    if stats.shift_radar is None or stats.shift_radar == stats.shift_lidar:
        code = VerdictCode.DIVERGENT_UNKNOWN
    elif stats.shift_radar > stats.shift_lidar:
        code = VerdictCode.DIVERGENT_RADAR
    else:
        code = VerdictCode.DIVERGENT_LIDAR
    return PmuVerdict(code, stats)


class Pmu:
    """Frame accumulator for one corner."""

    def __init__(self, thresholds: PmuThresholds | None = None):
        self.thresholds = thresholds or PmuThresholds()
        self.reset()

    def reset(self):
        self.radar: list[int] = []
        self.lidar: list[int] = []
        self.prev_sums: tuple[int, int] | None = None

    @property
    def fill(self) -> int:
        return len(self.radar)

    def push(self, radar, lidar) -> PmuVerdict | None:
        """Add one aligned sample pair; returns a verdict on the 16th."""
        self.radar.append(int(radar))
        self.lidar.append(int(lidar))
        if len(self.radar) < FRAME:
            return None
        stats = frame_stats(self.radar, self.lidar, self.prev_sums)
        self.prev_sums = (stats.sum_radar, stats.sum_lidar)
        self.radar, self.lidar = [], []
        return classify_frame(stats, self.thresholds)


def pmu_push(state: Pmu, radar: CrispSample, lidar: CrispSample) -> PmuVerdict | None:
    return state.push(radar.value, lidar.value)


def pmu_reset(state: Pmu) -> None:
    state.reset()
