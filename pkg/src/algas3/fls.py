"""Localized fuzzy logic node fusing the two filtered distance channels.

Mamdani inference in integer arithmetic: trapezoid memberships in Q1.15,
min-AND, rule and gate weights in Q1.7 applied by truncating multiply,
max-aggregation, and a 256-point clipped centroid over the output universe.
The rulebase itself is data (see :mod:`algas3.fru`), never code.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .numerics import (
    Q7_ONE,
    Q15_ONE,
    WEIGHT_FRAC_BITS,
    CrispSample,
    div_round_half_up,
)

COMMAND_MIN = -128
COMMAND_MAX = 127
FAILSAFE_COMMAND = 16


class FlsConfigError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class FlsCommand:
    """Vertical-rate command; negative values descend."""

    value: int

    def __post_init__(self):
        if not COMMAND_MIN <= self.value <= COMMAND_MAX:
            raise FlsConfigError(f"command {self.value} outside 8-bit range")


FAILSAFE = FlsCommand(FAILSAFE_COMMAND)


@dataclass(frozen=True, slots=True)
class MembershipFunction:
    """Trapezoid ``a <= b <= c <= d``; a triangle has ``b == c``."""

    label: str
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if not self.a <= self.b <= self.c <= self.d:
            raise FlsConfigError(
                f"term {self.label!r}: breakpoints must be non-decreasing")

    @property
    def breakpoints(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def degree(self, x: int) -> int:
        a, b, c, d = self.a, self.b, self.c, self.d
        if b <= x <= c:
            return Q15_ONE
        if x <= a or x >= d:
            return 0
        if x < b:
            return div_round_half_up(Q15_ONE * (x - a), b - a)
        return div_round_half_up(Q15_ONE * (d - x), d - c)

    def degrees(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`degree` over an integer array."""
        a, b, c, d = self.a, self.b, self.c, self.d
        xs = np.asarray(xs, dtype=np.int64)
        out = np.zeros(xs.shape, dtype=np.int64)
        if b > a:
            m = (xs > a) & (xs < b)
            out[m] = (2 * Q15_ONE * (xs[m] - a) + (b - a)) // (2 * (b - a))
        if d > c:
            m = (xs > c) & (xs < d)
            out[m] = (2 * Q15_ONE * (d - xs[m]) + (d - c)) // (2 * (d - c))
        out[(xs >= b) & (xs <= c)] = Q15_ONE
        return out

    def value(self, x: float) -> float:
        """Unquantized membership, for reference computations."""
        a, b, c, d = self.a, self.b, self.c, self.d
        if b <= x <= c:
            return 1.0
        if x <= a or x >= d:
            return 0.0
        if x < b:
            return (x - a) / (b - a)
        return (d - x) / (d - c)


@dataclass(frozen=True)
class TermSet:
    """The linguistic terms partitioning one channel's integer universe."""

    channel: str
    lo: int
    hi: int
    terms: tuple[MembershipFunction, ...]
    require_coverage: bool = True

    def __post_init__(self):
        if self.lo > self.hi:
            raise FlsConfigError(f"channel {self.channel}: empty universe")
        labels = [t.label for t in self.terms]
        if len(set(labels)) != len(labels):
            raise FlsConfigError(f"channel {self.channel}: duplicate term labels")
        for t in self.terms:
            if t.a < self.lo or t.d > self.hi:
                raise FlsConfigError(
                    f"term {t.label!r} leaves the {self.channel} universe "
                    f"[{self.lo}, {self.hi}]")
        if self.require_coverage:
            gap = self.coverage_gap()
            if gap is not None:
                raise FlsConfigError(
                    f"channel {self.channel}: no term covers value {gap}")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(t.label for t in self.terms)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def coverage_gap(self) -> int | None:
        """First universe value where every degree is zero, else None."""
        xs = np.arange(self.lo, self.hi + 1)
        covered = np.zeros(xs.shape, dtype=bool)
        for t in self.terms:
            covered |= t.degrees(xs) > 0
        if covered.all():
            return None
        return int(xs[np.argmin(covered)])

    def fuzzify(self, x: int) -> tuple[int, ...]:
        if not self.lo <= x <= self.hi:
            raise FlsConfigError(f"{x} outside the {self.channel} universe")
        return tuple(t.degree(x) for t in self.terms)

    def table(self) -> np.ndarray:
        """Degree of every term at every universe point, shape (terms, points)."""
        xs = np.arange(self.lo, self.hi + 1)
        return np.stack([t.degrees(xs) for t in self.terms])


@dataclass(frozen=True)
class FuzzyRule:
    name: str
    radar_term: str
    lidar_term: str
    consequent: str
    base_weight: int = Q7_ONE
    tags: tuple[str, ...] = ()

    def __post_init__(self):
        if not 0 <= self.base_weight <= Q7_ONE:
            raise FlsConfigError(f"rule {self.name}: weight outside [0, 1]")


class Gate(NamedTuple):
    enabled: bool = True
    weight: int = Q7_ONE


def open_gates(n: int) -> tuple[Gate, ...]:
    return (Gate(),) * n


@dataclass(frozen=True)
class Rulebase:
    radar: TermSet
    lidar: TermSet
    output: TermSet
    rules: tuple[FuzzyRule, ...]
    _index: tuple = field(init=False, repr=False, compare=False)
    _out_table: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        idx = []
        for r in self.rules:
            try:
                idx.append((self.radar.index(r.radar_term),
                            self.lidar.index(r.lidar_term),
                            self.output.index(r.consequent)))
            except ValueError as exc:
                raise FlsConfigError(f"rule {r.name}: unknown term") from exc
        if self.output.hi - self.output.lo + 1 != 256:
            raise FlsConfigError("output universe must have 256 points")
        object.__setattr__(self, "_index", tuple(idx))
        object.__setattr__(self, "_out_table", self.output.table())

    def __len__(self):
        return len(self.rules)

    def rules_tagged(self, tag: str) -> list[int]:
        return [i for i, r in enumerate(self.rules) if tag in r.tags]

    @property
    def output_points(self) -> np.ndarray:
        return np.arange(self.output.lo, self.output.hi + 1, dtype=np.int64)


def fuzzify(x: CrispSample | int, terms: TermSet) -> tuple[int, ...]:
    return terms.fuzzify(int(x))


def firing_strength(radar_deg: int, lidar_deg: int, base_weight: int,
                    gate: Gate) -> int:
    if not gate.enabled:
        return 0
    s = (min(radar_deg, lidar_deg) * base_weight) >> WEIGHT_FRAC_BITS
    return (s * gate.weight) >> WEIGHT_FRAC_BITS


def infer(radar_degrees: Sequence[int], lidar_degrees: Sequence[int],
          rulebase: Rulebase, gates: Sequence[Gate] | None = None
          ) -> tuple[int, ...]:
    """Clipping level of each output term after max-aggregation."""
    if gates is None:
        gates = open_gates(len(rulebase))
    if len(gates) != len(rulebase):
        raise FlsConfigError(
            f"{len(gates)} gates for a {len(rulebase)}-rule rulebase")
    agg = [0] * len(rulebase.output.terms)
    for rule, (ri, li, oi), gate in zip(rulebase.rules, rulebase._index, gates):
        s = firing_strength(radar_degrees[ri], lidar_degrees[li],
                            rule.base_weight, gate)
        if s > agg[oi]:
            agg[oi] = s
    return tuple(agg)


def defuzzify(aggregates: Sequence[int], rulebase: Rulebase) -> FlsCommand:
    """Clipped-centroid over the 256 output points, rounded half up."""
    clip = np.asarray(aggregates, dtype=np.int64)[:, None]
    mu = np.minimum(rulebase._out_table, clip).max(axis=0)
    den = int(mu.sum())
    if den == 0:
        return FAILSAFE
    num = int(mu @ rulebase.output_points)
    return FlsCommand(div_round_half_up(num, den))


def fls_step(radar: CrispSample, lidar: CrispSample, rulebase: Rulebase,
             gates: Sequence[Gate] | None = None) -> FlsCommand:
    agg = infer(fuzzify(radar, rulebase.radar), fuzzify(lidar, rulebase.lidar),
                rulebase, gates)
    return defuzzify(agg, rulebase)


# -- batch path -----------------------------------------------------------

def infer_grid(radar_values, lidar_values, rulebase: Rulebase,
               gates: Sequence[Gate] | None = None) -> np.ndarray:
    """Aggregates for every (radar, lidar) pair; shape (R, L, terms)."""
    if gates is None:
        gates = open_gates(len(rulebase))
    rdeg = rulebase.radar.table()[:, np.asarray(radar_values) - rulebase.radar.lo]
    ldeg = rulebase.lidar.table()[:, np.asarray(lidar_values) - rulebase.lidar.lo]
    shape = (rdeg.shape[1], ldeg.shape[1], len(rulebase.output.terms))
    agg = np.zeros(shape, dtype=np.int64)
    for rule, (ri, li, oi), gate in zip(rulebase.rules, rulebase._index, gates):
        if not gate.enabled:
            continue
        s = np.minimum(rdeg[ri][:, None], ldeg[li][None, :])
        s = (s * rule.base_weight) >> WEIGHT_FRAC_BITS
        s = (s * gate.weight) >> WEIGHT_FRAC_BITS
        np.maximum(agg[:, :, oi], s, out=agg[:, :, oi])
    return agg


def defuzzify_many(aggregates: np.ndarray, rulebase: Rulebase,
                   chunk: int = 8192) -> np.ndarray:
    """Vectorized :func:`defuzzify` over rows of an (N, terms) array."""
    aggregates = np.asarray(aggregates, dtype=np.int64)
    out = np.empty(len(aggregates), dtype=np.int64)
    table = rulebase._out_table[None, :, :]
    xs = rulebase.output_points
    for start in range(0, len(aggregates), chunk):
        block = aggregates[start:start + chunk]
        mu = np.minimum(table, block[:, :, None]).max(axis=1)
        den = mu.sum(axis=1)
        num = mu @ xs
        safe = np.where(den == 0, 1, den)
        val = (2 * num + safe) // (2 * safe)
        out[start:start + chunk] = np.where(den == 0, FAILSAFE_COMMAND, val)
    return out


def command_surface(rulebase: Rulebase, gates: Sequence[Gate] | None = None,
                    radar_values=None, lidar_values=None):
    """Commands over a radar x lidar grid (whole universes by default).

    Returns ``(commands, failsafe_mask)``; the mask marks pairs where no
    rule fired.  Identical aggregate vectors are defuzzified once.
    """
    if radar_values is None:
        radar_values = np.arange(rulebase.radar.lo, rulebase.radar.hi + 1)
    if lidar_values is None:
        lidar_values = np.arange(rulebase.lidar.lo, rulebase.lidar.hi + 1)
    agg = infer_grid(radar_values, lidar_values, rulebase, gates)
    flat = agg.reshape(-1, agg.shape[-1])
    uniq, inverse = np.unique(flat, axis=0, return_inverse=True)
    cmds = defuzzify_many(uniq, rulebase)[inverse.reshape(-1)]
    failsafe = ~flat.any(axis=1)
    return cmds.reshape(agg.shape[:2]), failsafe.reshape(agg.shape[:2])
