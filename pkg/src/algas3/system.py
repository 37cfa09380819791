"""Four corners stepped in lockstep, cross-checked over the HSDCI link.

Within a tick the corners share nothing mutable, so they may run in any
order or in parallel.  Frame exchange and pair checks form the barrier at
the end of the tick.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from . import hsdci
from .corner import Corner, CornerOutput
from .fru import DEFAULT_THRESHOLD, RuleTable, default_table
from .numerics import CrispSample
from .pmu import PmuThresholds

N_CORNERS = 4

# tamper(tick, corner, frame_bytes) -> frame_bytes, for link fault injection
Tamper = Callable[[int, int, bytes], bytes]


@dataclass(frozen=True)
class SystemOutput:
    tick: int
    corners: tuple[CornerOutput, ...]
    pairs: tuple[hsdci.PairStatus, ...]
    pair_alarm: bool
    attack_alarm: bool
    divergence_alarm: bool
    consensus: tuple[tuple[str, str], ...]  # (mode, "on" | "off" | "unsettled")

    @property
    def safety_alarm(self) -> bool:
        return self.pair_alarm or self.attack_alarm


def consensus_modes(mode_sets: Sequence[frozenset]) -> tuple[tuple[str, str], ...]:
    """Majority vote per mode; a 2-2 split is reported as unsettled."""
    out = []
    for mode in sorted(set().union(*mode_sets)):
        votes = sum(mode in s for s in mode_sets)
        if 2 * votes > len(mode_sets):
            out.append((mode, "on"))
        elif 2 * votes == len(mode_sets):
            out.append((mode, "unsettled"))
        else:
            out.append((mode, "off"))
    return tuple(out)


class System:
    def __init__(self, table: RuleTable | None = None, *, margin: int = hsdci.DEFAULT_MARGIN,
                 thresholds: PmuThresholds | None = None, parallel: bool = False,
                 initial_modes=("Landing-Mode",), fir_mode: str = "functional",
                 fru_threshold: int = DEFAULT_THRESHOLD, tamper: Tamper | None = None):
        self.table = table or default_table()
        self.margin = margin
        self.corners = [Corner(i, self.table, thresholds=thresholds,
                               initial_modes=initial_modes, fir_mode=fir_mode,
                               fru_threshold=fru_threshold)
                        for i in range(N_CORNERS)]
        self.parallel = parallel
        self.tamper = tamper
        self.tick = 0
        self._pool = ThreadPoolExecutor(N_CORNERS) if parallel else None

    def close(self):
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def step(self, frame: Sequence[tuple[CrispSample, CrispSample]],
             external: Mapping[tuple[str, str], int] | None = None) -> SystemOutput:
        if len(frame) != N_CORNERS:
            raise ValueError(f"expected {N_CORNERS} sensor pairs, got {len(frame)}")

        def run(i):
            radar, lidar = frame[i]
            return self.corners[i].step(radar, lidar, external)

        if self._pool is not None:
            outs = tuple(self._pool.map(run, range(N_CORNERS)))
        else:
            outs = tuple(run(i) for i in range(N_CORNERS))

        # barrier: exchange frames between opposite corners
        received = {}
        for o in outs:
            wire = hsdci.encode_frame(hsdci.HsdciFrame(
                o.corner, self.tick & 0xFFFFFFFF, o.fused, int(o.status)))
            if self.tamper is not None:
                wire = self.tamper(self.tick, o.corner, wire)
            try:
                received[o.corner] = hsdci.decode_frame(wire)
            except hsdci.FrameError:
                received[o.corner] = None

        pairs = []
        for a, b in hsdci.PAIRS:
            fa, fb = received[a], received[b]
            if fa is None or fb is None:
                pairs.append(hsdci.comm_fault((a, b), self.margin))
            else:
                pairs.append(hsdci.diff_pair_check(fa.distance, fb.distance,
                                                   self.margin, (a, b)))
        out = SystemOutput(
            tick=self.tick, corners=outs, pairs=tuple(pairs),
            pair_alarm=any(p.alarm for p in pairs),
            attack_alarm=any(o.status.is_attack for o in outs),
            divergence_alarm=any(o.status.is_divergent for o in outs),
            consensus=consensus_modes([o.modes for o in outs]))
        self.tick += 1
        return out


def system_step(system: System, frame, external=None) -> SystemOutput:
    return system.step(frame, external)
