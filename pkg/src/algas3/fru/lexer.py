"""Tokenizer for flight-rule files.

Logical keywords are recognised only in CAPS.  Fuzzy qualifiers are written
between asterisks (``*Very Noisy*``) and may contain single spaces.
Identifiers are hyphenated words such as ``Region-Beacon-Signal``.
``#`` starts a comment running to the end of the line.
"""
from __future__ import annotations

import re
from typing import NamedTuple

from .diagnostics import Diagnostic, RuleSyntaxError, error

KEYWORDS = frozenset({
    "IF", "AND", "THEN", "NOT",
    "MODE", "FLAG", "CAPABILITY", "INPUT", "WITH",
    "CHANNEL", "TERM", "FLS", "WEIGHT", "TAG",
})

PUNCT = {"(": "LPAREN", ")": "RPAREN", ",": "COMMA", ".": "DOT", ":": "COLON"}

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*(?:-[A-Za-z0-9_]+)*")
_NUMBER = re.compile(r"-?[0-9]+(?:\.[0-9]+)?")
_SPACE = re.compile(r"[ \t\r]+")


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    col: int

    @property
    def pos(self):
        return (self.line, self.col)

    def __repr__(self):
        if self.kind in ("IDENT", "QUALIFIER", "NUMBER"):
            return f"{self.kind}({self.text})"
        return self.kind


def normalize_qualifier(text: str) -> str:
    return " ".join(text.split())


def _decode(source) -> str:
    if isinstance(source, str):
        return source
    data = bytes(source)
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        head = data[:exc.start].decode("utf-8")
        line = head.count("\n") + 1
        col = len(head) - (head.rfind("\n") + 1) + 1
        raise RuleSyntaxError([error((line, col), "invalid UTF-8 in rule file")])


def tokenize(source) -> list[Token]:
    """Split rule text into tokens; raises RuleSyntaxError on bad characters.

    The returned list never includes an end marker; the parser adds its own.
    """
    text = _decode(source)
    tokens: list[Token] = []
    diags: list[Diagnostic] = []
    line, line_start, i, n = 1, 0, 0, len(text)
    while i < n:
        ch = text[i]
        col = i - line_start + 1
        if ch == "\n":
            line += 1
            line_start = i + 1
            i += 1
            continue
        m = _SPACE.match(text, i)
        if m:
            i = m.end()
            continue
        if ch == "#":
            j = text.find("\n", i)
            i = n if j < 0 else j
            continue
        if ch in PUNCT:
            tokens.append(Token(PUNCT[ch], ch, line, col))
            i += 1
            continue
        if ch == "*":
            j = i + 1
            while j < n and text[j] not in "*\n":
                j += 1
            if j >= n or text[j] != "*":
                diags.append(error((line, col), "unterminated qualifier"))
                i = j
                continue
            body = normalize_qualifier(text[i + 1:j])
            if not body:
                diags.append(error((line, col), "empty qualifier"))
            elif any(not (c.isascii() and (c.isalnum() or c in " -_'")) for c in body):
                diags.append(error((line, col), f"illegal character in qualifier *{body}*"))
            else:
                tokens.append(Token("QUALIFIER", body, line, col))
            i = j + 1
            continue
        m = _IDENT.match(text, i)
        if m:
            word = m.group()
            tokens.append(Token(word if word in KEYWORDS else "IDENT", word, line, col))
            i = m.end()
            continue
        m = _NUMBER.match(text, i)
        if m:
            tokens.append(Token("NUMBER", m.group(), line, col))
            i = m.end()
            continue
        diags.append(error((line, col), f"illegal character {ch!r}"))
        i += 1
    if diags:
        raise RuleSyntaxError(diags)
    return tokens
