"""One spatial corner: two FIR filters feeding the FLS node and the PMU."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

from . import fls
from .fir import FirFilter
from .fru import DEFAULT_THRESHOLD, Directives, RuleTable, evaluate
from .numerics import LIDAR_WIDTH, RADAR_WIDTH, Q15_ONE, CrispSample
from .pmu import Pmu, PmuThresholds, PmuVerdict, VerdictCode

# FRU inputs driven by this corner's PMU
RADAR_NOISE = ("uWave-Sensor", "Very Noisy")
LIDAR_NOISE = ("Optical-Sensor", "Very Noisy")


class Priority(enum.IntEnum):
    BALANCED = 0
    PREFER_RADAR = 1
    PREFER_LIDAR = 2


def apply_priority(verdict: PmuVerdict | VerdictCode | None) -> Priority:
    """Only a spectrum attack moves priority, and always to the other band."""
    code = getattr(verdict, "code", verdict)
    if code == VerdictCode.ATTACK_RADAR:
        return Priority.PREFER_LIDAR
    if code == VerdictCode.ATTACK_LIDAR:
        return Priority.PREFER_RADAR
    return Priority.BALANCED


def noise_degrees(verdict: PmuVerdict | None,
                  thresholds: PmuThresholds) -> dict[tuple[str, str], int]:
    """Map a frame verdict onto the FRU's per-sensor *Very Noisy* degrees.

    A non-nominal frame marks its suspect channel; an unknown suspect marks
    both; a channel whose own frame variance exceeds the threshold is marked
    as well.
    """
    radar = lidar = 0
    if verdict is not None and verdict.code != VerdictCode.NOMINAL:
        code, st = verdict.code, verdict.stats
        if code in (VerdictCode.DIVERGENT_RADAR, VerdictCode.ATTACK_RADAR,
                    VerdictCode.DIVERGENT_UNKNOWN) or st.var_radar > thresholds.variance:
            radar = Q15_ONE
        if code in (VerdictCode.DIVERGENT_LIDAR, VerdictCode.ATTACK_LIDAR,
                    VerdictCode.DIVERGENT_UNKNOWN) or st.var_lidar > thresholds.variance:
            lidar = Q15_ONE
    return {RADAR_NOISE: radar, LIDAR_NOISE: lidar}


def fuse(radar: int, lidar_aligned: int, priority: Priority) -> int:
    if priority == Priority.PREFER_RADAR:
        return radar
    if priority == Priority.PREFER_LIDAR:
        return lidar_aligned
    return (radar + lidar_aligned) // 2


@dataclass(frozen=True)
class CornerOutput:
    tick: int
    corner: int
    radar_raw: int
    lidar_raw: int
    radar_filtered: int
    lidar_filtered: int  # aligned to the 11-bit universe
    fused: int
    command: int
    status: VerdictCode  # latest completed frame
    priority: Priority
    verdict: PmuVerdict | None = None  # set only on frame-completion ticks
    signals: frozenset = frozenset()
    modes: frozenset = frozenset()
    directives: Directives | None = field(default=None, compare=False, repr=False)


class Corner:
    """Mutable state of one corner core; step it once per tick."""

    def __init__(self, corner_id: int, table: RuleTable, *,
                 thresholds: PmuThresholds | None = None,
                 initial_modes=("Landing-Mode",), fir_mode: str = "functional",
                 fru_threshold: int = DEFAULT_THRESHOLD):
        if not 0 <= corner_id <= 3:
            raise ValueError(f"corner id {corner_id} outside 0..3")
        if table.rulebase is None:
            raise ValueError("rule table carries no FLS rulebase")
        self.id = corner_id
        self.table = table
        self.thresholds = thresholds or PmuThresholds()
        self.fru_threshold = fru_threshold
        self.initial_modes = frozenset(initial_modes)
        self.fir_mode = fir_mode
        self.reset()

    def reset(self):
        self.radar_fir = FirFilter(RADAR_WIDTH, self.fir_mode)
        self.lidar_fir = FirFilter(LIDAR_WIDTH, self.fir_mode)
        self.pmu = Pmu(self.thresholds)
        self.modes = set(self.initial_modes)
        self.priority = Priority.BALANCED
        self.last_verdict: PmuVerdict | None = None
        self.tick = 0

    def step(self, radar_raw: CrispSample, lidar_raw: CrispSample,
             external: Mapping[tuple[str, str], int] | None = None) -> CornerOutput:
        r = self.radar_fir.step(radar_raw).sample
        l10 = self.lidar_fir.step(lidar_raw).sample
        l11 = l10.value << 1

        verdict = self.pmu.push(r.value, l11)
        if verdict is not None:
            self.last_verdict = verdict
            self.priority = apply_priority(verdict)

        degrees = dict(external or {})
        degrees.update(noise_degrees(self.last_verdict, self.thresholds))
        directives = evaluate(self.table, self.modes, degrees, self.fru_threshold)
        cmd = fls.fls_step(r, l10, self.table.rulebase, directives.gates)

        out = CornerOutput(
            tick=self.tick, corner=self.id,
            radar_raw=radar_raw.value, lidar_raw=lidar_raw.value,
            radar_filtered=r.value, lidar_filtered=l11,
            fused=fuse(r.value, l11, self.priority),
            command=cmd.value,
            status=self.last_verdict.code if self.last_verdict else VerdictCode.NOMINAL,
            priority=self.priority, verdict=verdict,
            signals=directives.signals,
            modes=frozenset(self.modes), directives=directives)

        # transitions take effect from the next tick
        self.modes -= directives.mode_stops
        if directives.mode_request is not None:
            self.modes.add(directives.mode_request)
        self.tick += 1
        return out


def core_step(state: Corner, radar_raw: CrispSample, lidar_raw: CrispSample,
              external=None) -> CornerOutput:
    return state.step(radar_raw, lidar_raw, external)
