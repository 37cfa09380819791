from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class Diagnostic:
    line: int
    col: int
    severity: str  # "error" | "warning"
    message: str

    def format(self, filename: str = "<rules>") -> str:
        return f"{filename}:{self.line}:{self.col}: {self.severity}: {self.message}"

    @property
    def is_error(self) -> bool:
        return self.severity == "error"


class RuleError(Exception):
    """Rule text could not be turned into a table; carries every diagnostic."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0].format() if self.diagnostics else "rule error"
        more = len(self.diagnostics) - 1
        super().__init__(first + (f" (+{more} more)" if more > 0 else ""))


class RuleSyntaxError(RuleError):
    pass


class RuleCompileError(RuleError):
    pass


def error(pos, message: str) -> Diagnostic:
    return Diagnostic(pos[0], pos[1], "error", message)


def warning(pos, message: str) -> Diagnostic:
    return Diagnostic(pos[0], pos[1], "warning", message)
