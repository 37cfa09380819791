from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..fls import Gate
from ..numerics import Q7_ONE
from .compiler import Op, RuleTable

DEFAULT_THRESHOLD = 16384  # 0.5 in Q1.15


@dataclass(frozen=True)
class Directives:
    """What the flight rules ask of the corner for one tick."""

    gates: tuple[Gate, ...]
    signals: frozenset = frozenset()
    mode_request: str | None = None
    mode_stops: frozenset = frozenset()
    enables: frozenset = frozenset()
    conflict: bool = False
    fired: tuple[int, ...] = field(default=(), compare=False)

    @property
    def empty(self) -> bool:
        return not (self.signals or self.mode_request or self.mode_stops
                    or self.enables or self.conflict)


def evaluate(table: RuleTable, modes, degrees: Mapping[tuple[str, str], int],
             threshold: int = DEFAULT_THRESHOLD) -> Directives:
    """Fire every rule whose mode and fuzzy conditions hold.

    A fuzzy predicate is true when its degree (Q1.15, missing = 0) reaches
    ``threshold``.  Gate edits commute, so firing order only matters for
    competing ``Enter`` requests, where the earliest rule wins.
    """
    word = table.mode_word(modes)
    enabled = [True] * table.symbols.gate_count
    weight = [Q7_ONE] * table.symbols.gate_count
    signals, stops, enables = set(), set(), set()
    request, conflict, fired = None, False, []
    for i, row in enumerate(table.rows):
        if word & row.mode_mask != row.mode_bits:
            continue
        if any(degrees.get(key, 0) < threshold for key in row.fuzzy):
            continue
        fired.append(i)
        for op, arg in row.actions:
            if op is Op.REDUCE:
                for k in arg:
                    weight[k] >>= 1
            elif op is Op.SUPPRESS:
                for k in arg:
                    enabled[k] = False
            elif op is Op.SIGNAL:
                signals.add(arg)
            elif op is Op.ENABLE:
                enables.add(arg)
            elif op is Op.STOP:
                stops.add(arg)
            elif request is None:
                request = arg
            elif request != arg:
                conflict = True
    gates = tuple(Gate(e, w) for e, w in zip(enabled, weight))
    return Directives(gates, frozenset(signals), request, frozenset(stops),
                      frozenset(enables), conflict, tuple(fired))
