"""Syntax tree for rule files.  Positions never take part in equality."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

Pos = tuple  # (line, col)


def _pos():
    return field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class ModePredicate:
    name: str
    negated: bool = False
    pos: Pos = _pos()


@dataclass(frozen=True)
class FuzzyPredicate:
    signal: str
    qualifier: str
    pos: Pos = _pos()


Atom = Union[ModePredicate, FuzzyPredicate]


@dataclass(frozen=True)
class FuzzyAction:
    verb: str
    target: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class SignalAction:
    flag: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class ModeAction:
    op: str  # "Stop" | "Enter"
    mode: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class EnableAction:
    capability: str
    pos: Pos = _pos()


Action = Union[FuzzyAction, SignalAction, ModeAction, EnableAction]


@dataclass(frozen=True)
class FlightRule:
    antecedent: tuple[Atom, ...]
    actions: tuple[Action, ...]
    pos: Pos = _pos()


# -- declarations ---------------------------------------------------------

@dataclass(frozen=True)
class NameDecl:
    kind: str  # "MODE" | "FLAG" | "CAPABILITY"
    names: tuple[str, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class InputDecl:
    name: str
    qualifiers: tuple[str, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class ChannelDecl:
    name: str
    lo: int
    hi: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class TermDecl:
    channel: str
    label: str
    breakpoints: tuple[int, int, int, int]
    pos: Pos = _pos()


@dataclass(frozen=True)
class FlsRuleDecl:
    name: str
    radar: FuzzyPredicate
    lidar: FuzzyPredicate
    output: FuzzyPredicate
    weight: int = 128  # Q1.7
    tags: tuple[str, ...] = ()
    pos: Pos = _pos()


Decl = Union[NameDecl, InputDecl, ChannelDecl, TermDecl]


@dataclass(frozen=True)
class RuleAst:
    decls: tuple[Decl, ...] = ()
    fls_rules: tuple[FlsRuleDecl, ...] = ()
    rules: tuple[FlightRule, ...] = ()
