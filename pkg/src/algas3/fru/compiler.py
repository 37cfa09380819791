"""Name resolution and lowering of a rule AST into a :class:`RuleTable`."""
from __future__ import annotations

import difflib
import enum
from dataclasses import dataclass, field

from .. import fls
from . import ast
from .diagnostics import Diagnostic, RuleCompileError, error, warning

RADAR_CHANNEL = "Radar"
LIDAR_CHANNEL = "Lidar"
OUTPUT_CHANNEL = "Command"

# verb -> gate operation on FLS rules carrying the target tag
VERBS = {"further-reduce": "halve", "suppress": "disable"}


class Op(enum.Enum):
    REDUCE = "reduce"
    SUPPRESS = "suppress"
    SIGNAL = "signal"
    STOP = "stop"
    ENTER = "enter"
    ENABLE = "enable"


@dataclass
class SymbolTable:
    """Everything a rule file declares, plus the FLS rulebase built from it."""

    decls: tuple = ()
    fls_decls: tuple = ()
    modes: tuple[str, ...] = ()
    flags: frozenset = frozenset()
    capabilities: frozenset = frozenset()
    inputs: dict = field(default_factory=dict)  # name -> qualifiers
    channels: dict = field(default_factory=dict)  # name -> (lo, hi)
    terms: dict = field(default_factory=dict)  # channel -> [TermDecl]
    tags: dict = field(default_factory=dict)  # tag -> FLS rule indices
    rulebase: fls.Rulebase | None = None

    @classmethod
    def build(cls, decls, fls_decls=()) -> tuple["SymbolTable", list[Diagnostic]]:
        diags: list[Diagnostic] = []
        seen: dict[str, str] = {}
        modes, flags, caps = [], set(), set()
        inputs, channels, terms = {}, {}, {}

        def claim(name, kind, pos):
            if name in seen:
                diags.append(error(pos, f"{kind} {name!r} already declared as {seen[name]}"))
                return False
            seen[name] = kind
            return True

        for d in decls:
            if isinstance(d, ast.NameDecl):
                kind = d.kind.lower()
                for name in d.names:
                    if claim(name, kind, d.pos):
                        {"mode": modes.append, "flag": flags.add,
                         "capability": caps.add}[kind](name)
            elif isinstance(d, ast.InputDecl):
                if claim(d.name, "input", d.pos):
                    if len(set(d.qualifiers)) != len(d.qualifiers):
                        diags.append(error(d.pos, f"input {d.name!r} repeats a qualifier"))
                    inputs[d.name] = tuple(d.qualifiers)
            elif isinstance(d, ast.ChannelDecl):
                if claim(d.name, "channel", d.pos):
                    if d.lo > d.hi:
                        diags.append(error(d.pos, f"channel {d.name!r} has an empty range"))
                    channels[d.name] = (d.lo, d.hi)
            elif isinstance(d, ast.TermDecl):
                terms.setdefault(d.channel, []).append(d)

        for ch, tds in terms.items():
            if ch not in channels:
                diags.append(error(tds[0].pos, _unresolved("channel", ch, channels)))

        tags: dict[str, list[int]] = {}
        for i, r in enumerate(fls_decls):
            for t in r.tags:
                tags.setdefault(t, []).append(i)
        table = cls(tuple(decls), tuple(fls_decls), tuple(modes), frozenset(flags),
                    frozenset(caps), inputs, channels, terms,
                    {t: tuple(v) for t, v in tags.items()})
        if fls_decls:
            table.rulebase = _build_rulebase(table, diags)
        return table, diags

    def merged_with(self, tree: ast.RuleAst):
        return SymbolTable.build(self.decls + tree.decls,
                                 self.fls_decls + tree.fls_rules)

    @property
    def gate_count(self) -> int:
        return len(self.rulebase) if self.rulebase is not None else 0


def _unresolved(kind: str, name: str, candidates) -> str:
    msg = f"unresolved {kind} {name!r}"
    close = difflib.get_close_matches(name, list(candidates), n=3, cutoff=0.6)
    if close:
        msg += " (did you mean " + " or ".join(repr(c) for c in close) + "?)"
    return msg


def _termset(sym: SymbolTable, channel: str, diags, coverage: bool):
    if channel not in sym.channels:
        diags.append(error((1, 1), f"FLS rules need a {channel} channel declaration"))
        return None
    lo, hi = sym.channels[channel]
    tds = sym.terms.get(channel, [])
    mfs = []
    for td in tds:
        try:
            mfs.append(fls.MembershipFunction(td.label, *td.breakpoints))
        except fls.FlsConfigError as exc:
            diags.append(error(td.pos, str(exc)))
    try:
        return fls.TermSet(channel, lo, hi, tuple(mfs), require_coverage=coverage)
    except fls.FlsConfigError as exc:
        pos = tds[0].pos if tds else (1, 1)
        diags.append(error(pos, str(exc)))
        return None


def _build_rulebase(sym: SymbolTable, diags) -> fls.Rulebase | None:
    before = len(diags)
    radar = _termset(sym, RADAR_CHANNEL, diags, coverage=True)
    lidar = _termset(sym, LIDAR_CHANNEL, diags, coverage=True)
    output = _termset(sym, OUTPUT_CHANNEL, diags, coverage=False)
    if output is not None and output.hi - output.lo + 1 != 256:
        diags.append(error((1, 1), "Command channel must span 256 points"))
        output = None
    rules = []
    names = set()
    for r in sym.fls_decls:
        if r.name in names:
            diags.append(error(r.pos, f"FLS rule {r.name!r} defined twice"))
        names.add(r.name)
        for pred, channel, ts in ((r.radar, RADAR_CHANNEL, radar),
                                  (r.lidar, LIDAR_CHANNEL, lidar),
                                  (r.output, OUTPUT_CHANNEL, output)):
            if pred.signal != channel:
                diags.append(error(pred.pos, f"FLS rule {r.name}: expected channel "
                                   f"{channel}, found {pred.signal!r}"))
            elif ts is not None and pred.qualifier not in ts.labels:
                diags.append(error(pred.pos, _unresolved(
                    f"{channel} term", pred.qualifier, ts.labels)))
        rules.append(fls.FuzzyRule(r.name, r.radar.qualifier, r.lidar.qualifier,
                                   r.output.qualifier, r.weight, r.tags))
    if len(diags) > before:
        return None
    return fls.Rulebase(radar, lidar, output, tuple(rules))


@dataclass(frozen=True)
class CompiledRule:
    mode_mask: int
    mode_bits: int
    fuzzy: tuple[tuple[str, str], ...]
    actions: tuple[tuple[Op, object], ...]
    source: ast.FlightRule = field(compare=False)


@dataclass(frozen=True)
class RuleTable:
    symbols: SymbolTable = field(compare=False)
    rows: tuple[CompiledRule, ...]
    warnings: tuple[Diagnostic, ...] = field(default=(), compare=False)

    @property
    def rulebase(self) -> fls.Rulebase | None:
        return self.symbols.rulebase

    def __len__(self):
        return len(self.rows)

    def mode_word(self, modes) -> int:
        word = 0
        for i, m in enumerate(self.symbols.modes):
            if m in modes:
                word |= 1 << i
        return word


def _lower_rule(rule: ast.FlightRule, sym: SymbolTable, diags) -> CompiledRule:
    mode_index = {m: i for i, m in enumerate(sym.modes)}
    mask = bits = 0
    fuzzy = []
    for atom in rule.antecedent:
        if isinstance(atom, ast.ModePredicate):
            if atom.name not in mode_index:
                diags.append(error(atom.pos, _unresolved("mode", atom.name, sym.modes)))
                continue
            bit = 1 << mode_index[atom.name]
            if mask & bit and bool(bits & bit) == atom.negated:
                diags.append(warning(atom.pos, f"rule can never fire: {atom.name} "
                                     "required both set and clear"))
            mask |= bit
            if not atom.negated:
                bits |= bit
        else:
            if atom.signal not in sym.inputs:
                diags.append(error(atom.pos, _unresolved("input", atom.signal, sym.inputs)))
            elif atom.qualifier not in sym.inputs[atom.signal]:
                diags.append(error(atom.pos, _unresolved(
                    f"qualifier of {atom.signal}", atom.qualifier,
                    sym.inputs[atom.signal])))
            fuzzy.append((atom.signal, atom.qualifier))

    actions = []
    for act in rule.actions:
        if isinstance(act, ast.FuzzyAction):
            if act.verb not in VERBS:
                diags.append(error(act.pos, _unresolved("verb", act.verb, VERBS)))
                continue
            if act.target not in sym.tags:
                diags.append(error(act.pos, _unresolved("FLS tag", act.target, sym.tags)))
                continue
            op = Op.REDUCE if VERBS[act.verb] == "halve" else Op.SUPPRESS
            actions.append((op, sym.tags[act.target]))
        elif isinstance(act, ast.SignalAction):
            if act.flag not in sym.flags:
                diags.append(error(act.pos, _unresolved("flag", act.flag, sym.flags)))
            actions.append((Op.SIGNAL, act.flag))
        elif isinstance(act, ast.EnableAction):
            if act.capability not in sym.capabilities:
                diags.append(error(act.pos, _unresolved(
                    "capability", act.capability, sym.capabilities)))
            actions.append((Op.ENABLE, act.capability))
        else:
            if act.mode not in mode_index:
                diags.append(error(act.pos, _unresolved("mode", act.mode, sym.modes)))
            actions.append((Op.STOP if act.op == "Stop" else Op.ENTER, act.mode))
    return CompiledRule(mask, bits, tuple(fuzzy), tuple(actions), rule)


def compile_rules(tree: ast.RuleAst, symbols: SymbolTable | None = None) -> RuleTable:
    """Resolve every name in ``tree`` and lower its flight rules.

    Declarations in ``tree`` extend ``symbols`` when both are given.  Raises
    RuleCompileError listing every error; warnings ride on the table.
    """
    if symbols is None:
        sym, diags = SymbolTable.build(tree.decls, tree.fls_rules)
    elif tree.decls or tree.fls_rules:
        sym, diags = symbols.merged_with(tree)
    else:
        sym, diags = symbols, []
    rows = []
    seen: dict = {}
    for rule in tree.rules:
        rows.append(_lower_rule(rule, sym, diags))
        key = (rule.antecedent, rule.actions)
        if key in seen:
            diags.append(warning(rule.pos, f"duplicate of rule at line {seen[key][0]}"))
        else:
            seen[key] = rule.pos
    errors = [d for d in diags if d.is_error]
    if errors:
        raise RuleCompileError(sorted(diags, key=lambda d: (d.line, d.col)))
    return RuleTable(sym, tuple(rows), tuple(d for d in diags if not d.is_error))
