"""Run traces and their CSV form.

CSV schema (one header row, then one row per tick, columns in this order):

``tick, altitude``, then for each corner ``c`` in 0..3:
``c{c}_radar_raw, c{c}_lidar_raw, c{c}_radar_filt, c{c}_lidar_filt,
c{c}_fused, c{c}_cmd, c{c}_verdict, c{c}_priority, c{c}_signals, c{c}_modes``,
then for each pair ``ab`` in (02, 13): ``p{ab}_delta, p{ab}_ok, p{ab}_fault``,
then ``alarm_pair, alarm_attack, alarm_divergence, consensus``.

``lidar_filt`` is in the 11-bit radar universe.  ``verdict`` is the code of
the latest completed PMU frame (0 nominal, 1/2/3 divergent radar/lidar/
unknown, 4/5 attack radar/lidar).  ``priority`` is 0 balanced, 1 prefer
radar, 2 prefer lidar.  Set-valued cells are ``|``-joined and sorted;
``p{ab}_delta`` is empty on a link fault.
"""
from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import numpy as np

from .pmu import VerdictCode
from .system import N_CORNERS, SystemOutput

if TYPE_CHECKING:
    from .scenario import SensorFrame

CORNER_FIELDS = ("radar_raw", "lidar_raw", "radar_filt", "lidar_filt", "fused",
                 "cmd", "verdict", "priority", "signals", "modes")
PAIR_FIELDS = ("delta", "ok", "fault")


def csv_header() -> list[str]:
    cols = ["tick", "altitude"]
    for c in range(N_CORNERS):
        cols += [f"c{c}_{f}" for f in CORNER_FIELDS]
    for a, b in ((0, 2), (1, 3)):
        cols += [f"p{a}{b}_{f}" for f in PAIR_FIELDS]
    return cols + ["alarm_pair", "alarm_attack", "alarm_divergence", "consensus"]


@dataclass(frozen=True)
class TickRecord:
    tick: int
    altitude: int
    sensors: "SensorFrame"
    output: SystemOutput

    def row(self) -> list:
        row: list[Any] = [self.tick, self.altitude]
        for o in self.output.corners:
            row += [o.radar_raw, o.lidar_raw, o.radar_filtered, o.lidar_filtered,
                    o.fused, o.command, int(o.status), int(o.priority),
                    "|".join(sorted(o.signals)), "|".join(sorted(o.modes))]
        for p in self.output.pairs:
            row += ["" if p.delta is None else p.delta, int(p.within_margin),
                    int(p.comm_fault)]
        row += [int(self.output.pair_alarm), int(self.output.attack_alarm),
                int(self.output.divergence_alarm),
                "|".join(f"{m}={s}" for m, s in self.output.consensus)]
        return row


@dataclass
class SystemTrace:
    config: Any
    records: list[TickRecord]
    final_altitude: int | None = None

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    def corner_series(self, corner: int, attr: str) -> np.ndarray:
        """One CornerOutput attribute over time as an array."""
        return np.array([int(getattr(r.output.corners[corner], attr))
                         for r in self.records], dtype=np.int64)

    def altitudes(self) -> np.ndarray:
        return np.array([r.altitude for r in self.records], dtype=np.int64)

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(csv_header())
        for r in self.records:
            w.writerow(r.row())

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()

    def save(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            self.write_csv(fh)


@dataclass
class RunSummary:
    ticks: int
    verdicts: Counter = field(default_factory=Counter)
    pair_alarms: int = 0
    attack_ticks: int = 0
    first_non_nominal: tuple = (None, None, None, None)
    final_altitude: int | None = None
    samples_per_second: float | None = None

    @classmethod
    def from_trace(cls, trace: SystemTrace, wall_seconds: float | None = None):
        hist: Counter = Counter()
        first: list = [None] * N_CORNERS
        pair_alarms = attack_ticks = 0
        for rec in trace.records:
            out = rec.output
            pair_alarms += out.pair_alarm
            attack_ticks += out.attack_alarm
            for o in out.corners:
                if o.verdict is None:
                    continue
                hist[o.verdict.code] += 1
                if o.verdict.code != VerdictCode.NOMINAL and first[o.corner] is None:
                    first[o.corner] = rec.tick
        sps = None
        if wall_seconds:
            sps = len(trace) * N_CORNERS * 2 / wall_seconds
        return cls(len(trace), hist, pair_alarms, attack_ticks, tuple(first),
                   trace.final_altitude, sps)

    @property
    def safety_alarm(self) -> bool:
        return self.pair_alarms > 0 or self.attack_ticks > 0

    def format(self) -> str:
        lines = [f"ticks executed      : {self.ticks}"]
        hist = ", ".join(f"{code.name.lower()}={self.verdicts.get(code, 0)}"
                         for code in VerdictCode)
        lines.append(f"frame verdicts      : {hist}")
        lines.append(f"pair alarm ticks    : {self.pair_alarms}")
        lines.append(f"attack alarm ticks  : {self.attack_ticks}")
        first = ", ".join("-" if t is None else str(t) for t in self.first_non_nominal)
        lines.append(f"first non-nominal   : {first}")
        lines.append(f"final altitude      : {self.final_altitude}")
        if self.samples_per_second is not None:
            lines.append(f"throughput          : {self.samples_per_second:,.0f} samples/s")
        return "\n".join(lines)
