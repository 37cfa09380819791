"""Canonical rendering of a rule AST back to source text."""
from __future__ import annotations

from decimal import Decimal

from . import ast


def _atom(a) -> str:
    if isinstance(a, ast.FuzzyPredicate):
        return f"({a.signal} is *{a.qualifier}*)"
    return f"(NOT {a.name})" if a.negated else f"({a.name})"


def _action(a) -> str:
    if isinstance(a, ast.FuzzyAction):
        return f"*{a.verb}* {a.target}"
    if isinstance(a, ast.SignalAction):
        return f"signal {a.flag}"
    if isinstance(a, ast.EnableAction):
        return f"enable {a.capability}"
    return f"{a.op} {a.mode}"


def _weight(q: int) -> str:
    return format(Decimal(q) / Decimal(128), "f")


def render_decl(d) -> str:
    if isinstance(d, ast.NameDecl):
        return f"{d.kind} {', '.join(d.names)}."
    if isinstance(d, ast.InputDecl):
        quals = ", ".join(f"*{q}*" for q in d.qualifiers)
        return f"INPUT {d.name} WITH {quals}."
    if isinstance(d, ast.ChannelDecl):
        return f"CHANNEL {d.name} {d.lo} {d.hi}."
    if isinstance(d, ast.TermDecl):
        bps = " ".join(str(b) for b in d.breakpoints)
        return f"TERM {d.channel} *{d.label}* {bps}."
    raise TypeError(f"not a declaration: {d!r}")


def render_fls(r: ast.FlsRuleDecl) -> str:
    text = (f"FLS {r.name}: IF {_atom(r.radar)} AND {_atom(r.lidar)} "
            f"THEN {_atom(r.output)}")
    if r.weight != 128:
        text += f" WEIGHT {_weight(r.weight)}"
    if r.tags:
        text += f" TAG {', '.join(r.tags)}"
    return text + "."


def render_rule(r: ast.FlightRule) -> str:
    ante = " AND ".join(_atom(a) for a in r.antecedent)
    acts = ", ".join(_action(a) for a in r.actions)
    return f"IF {ante} THEN ({acts})."


def pretty_print(tree: ast.RuleAst) -> str:
    lines = [render_decl(d) for d in tree.decls]
    if tree.fls_rules:
        lines += [""] + [render_fls(r) for r in tree.fls_rules]
    if tree.rules:
        lines += [""] + [render_rule(r) for r in tree.rules]
    return "\n".join(lines).lstrip("\n") + "\n"
