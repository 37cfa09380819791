"""Flight Rules Unit: the rule-file language and its per-tick evaluator."""
from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path

from .ast import RuleAst
from .compiler import VERBS, CompiledRule, Op, RuleTable, SymbolTable, compile_rules
from .diagnostics import Diagnostic, RuleCompileError, RuleError, RuleSyntaxError
from .lexer import Token, tokenize
from .parser import parse, parse_tokens
from .printer import pretty_print
from .runtime import DEFAULT_THRESHOLD, Directives, evaluate

__all__ = [
    "DEFAULT_THRESHOLD", "VERBS", "CompiledRule", "Diagnostic", "Directives",
    "Op", "RuleAst", "RuleCompileError", "RuleError", "RuleSyntaxError",
    "RuleTable", "SymbolTable", "Token", "check_rules", "compile_rules",
    "default_rules_text", "default_table", "evaluate", "load_rules", "parse",
    "parse_tokens", "pretty_print", "tokenize",
]


def load_rules(source, symbols: SymbolTable | None = None) -> RuleTable:
    """Lex, parse and compile rule text (str or bytes) in one go."""
    return compile_rules(parse(source), symbols)


def check_rules(source, symbols: SymbolTable | None = None):
    """Return ``(table_or_None, diagnostics)`` without raising."""
    try:
        table = load_rules(source, symbols)
    except RuleError as exc:
        return None, exc.diagnostics
    return table, list(table.warnings)


def default_rules_text() -> str:
    return resources.files("algas3.data").joinpath("default.rules").read_text("utf-8")


@lru_cache(maxsize=None)
def default_table() -> RuleTable:
    return load_rules(default_rules_text())


def read_rules(path) -> RuleTable:
    return load_rules(Path(path).read_bytes())
