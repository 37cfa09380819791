"""Recursive-descent parser for rule files.

Grammar::

    file     := stmt*
    stmt     := MODE names '.' | FLAG names '.' | CAPABILITY names '.'
              | INPUT ident WITH qual (',' qual)* '.'
              | CHANNEL ident int int '.'
              | TERM ident qual int int int int '.'
              | FLS ident ':' IF clause AND [IF] clause
                    THEN '(' ident 'is' qual ')' [WEIGHT num] [TAG names] '.'
              | IF clause (AND [IF] clause)* THEN '(' action (',' action)* ')' '.'
    clause   := '(' [NOT | 'Not'] ident ')' | '(' ident 'is' qual ')'
    action   := qual ident | 'signal' ident | 'enable' ident
              | 'Stop' ident | 'Enter' ident

On a syntax error the parser records a diagnostic and skips past the next
'.', so one bad statement does not hide the rest of the file.
"""
from __future__ import annotations

from decimal import Decimal, InvalidOperation

from . import ast
from .diagnostics import RuleSyntaxError, error
from .lexer import Token, tokenize

ACTION_WORDS = ("signal", "enable", "Stop", "Enter")

_DESCRIBE = {
    "LPAREN": "'('", "RPAREN": "')'", "COMMA": "','", "DOT": "'.'",
    "COLON": "':'", "IDENT": "identifier", "QUALIFIER": "*qualifier*",
    "NUMBER": "number", "EOF": "end of file",
}


def describe(kind: str) -> str:
    return _DESCRIBE.get(kind, kind)


class _Resync(Exception):
    pass


class Parser:
    def __init__(self, tokens: list[Token]):
        last = tokens[-1] if tokens else None
        eof_pos = (last.line, last.col + len(last.text)) if last else (1, 1)
        self.toks = list(tokens) + [Token("EOF", "", *eof_pos)]
        self.i = 0
        self.diagnostics = []

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "EOF":
            self.i += 1
        return t

    def fail(self, expected, tok: Token | None = None, message: str | None = None):
        tok = tok or self.tok
        if message is None:
            found = "end of file" if tok.kind == "EOF" else repr(tok.text)
            want = ", ".join(sorted({describe(e) for e in expected}))
            message = f"expected {want}; found {found}"
        self.diagnostics.append(error(tok.pos, message))
        raise _Resync

    def expect(self, *kinds: str) -> Token:
        if self.tok.kind in kinds:
            return self.advance()
        self.fail(kinds)

    def expect_word(self, word: str) -> Token:
        if self.tok.kind == "IDENT" and self.tok.text == word:
            return self.advance()
        self.fail([f"'{word}'"])

    def accept(self, kind: str) -> Token | None:
        if self.tok.kind == kind:
            return self.advance()
        return None

    def resync(self):
        while self.tok.kind not in ("DOT", "EOF"):
            self.advance()
        self.accept("DOT")

    # -- grammar
    def parse_file(self) -> ast.RuleAst:
        decls, fls, rules = [], [], []
        while self.tok.kind != "EOF":
            try:
                node = self.statement()
            except _Resync:
                self.resync()
                continue
            if isinstance(node, ast.FlightRule):
                rules.append(node)
            elif isinstance(node, ast.FlsRuleDecl):
                fls.append(node)
            else:
                decls.append(node)
        return ast.RuleAst(tuple(decls), tuple(fls), tuple(rules))

    def statement(self):
        kind = self.tok.kind
        if kind in ("MODE", "FLAG", "CAPABILITY"):
            start = self.advance()
            names = self.names()
            self.expect("DOT")
            return ast.NameDecl(kind, names, start.pos)
        if kind == "INPUT":
            return self.input_decl()
        if kind == "CHANNEL":
            start = self.advance()
            name = self.expect("IDENT").text
            lo, hi = self.integer(), self.integer()
            self.expect("DOT")
            return ast.ChannelDecl(name, lo, hi, start.pos)
        if kind == "TERM":
            start = self.advance()
            channel = self.expect("IDENT").text
            label = self.expect("QUALIFIER").text
            bps = tuple(self.integer() for _ in range(4))
            self.expect("DOT")
            return ast.TermDecl(channel, label, bps, start.pos)
        if kind == "FLS":
            return self.fls_rule()
        if kind == "IF":
            return self.flight_rule()
        self.fail(["IF", "FLS", "MODE", "FLAG", "CAPABILITY", "INPUT",
                   "CHANNEL", "TERM"])

    def names(self) -> tuple[str, ...]:
        out = [self.expect("IDENT").text]
        while self.accept("COMMA"):
            out.append(self.expect("IDENT").text)
        return tuple(out)

    def integer(self) -> int:
        tok = self.expect("NUMBER")
        if "." in tok.text:
            self.fail(["integer"], tok, f"expected an integer; found {tok.text!r}")
        return int(tok.text)

    def input_decl(self):
        start = self.advance()
        name = self.expect("IDENT").text
        self.expect("WITH")
        quals = [self.expect("QUALIFIER").text]
        while self.accept("COMMA"):
            quals.append(self.expect("QUALIFIER").text)
        self.expect("DOT")
        return ast.InputDecl(name, tuple(quals), start.pos)

    def fls_rule(self):
        start = self.advance()
        name = self.expect("IDENT").text
        self.expect("COLON")
        self.expect("IF")
        first = self.clause()
        self.expect("AND")
        self.accept("IF")
        second = self.clause()
        self.expect("THEN")
        out = self.clause()
        for c in (first, second, out):
            if not isinstance(c, ast.FuzzyPredicate):
                self.fail([], message=f"FLS rule {name}: every clause must be "
                          "of the form (Channel is *Term*)")
        weight = 128
        if self.accept("WEIGHT"):
            weight = self.weight()
        tags = ()
        if self.accept("TAG"):
            tags = self.names()
        self.expect("DOT")
        return ast.FlsRuleDecl(name, first, second, out, weight, tags, start.pos)

    def weight(self) -> int:
        tok = self.expect("NUMBER")
        try:
            w = Decimal(tok.text)
        except InvalidOperation:  # pragma: no cover - lexer guarantees digits
            self.fail(["number"], tok)
        if not 0 <= w <= 1:
            self.fail([], tok, f"weight {tok.text} outside [0, 1]")
        q = w * 128
        if q != q.to_integral_value():
            self.fail([], tok, f"weight {tok.text} is not a multiple of 1/128")
        return int(q)

    def flight_rule(self):
        start = self.expect("IF")
        atoms = [self.clause()]
        while self.accept("AND"):
            self.accept("IF")
            atoms.append(self.clause())
        self.expect("THEN")
        if self.tok.kind == "DOT" or (
                self.tok.kind == "LPAREN" and self.peek().kind == "RPAREN"):
            self.fail([], message="empty action list")
        self.expect("LPAREN")
        actions = [self.action()]
        while self.accept("COMMA"):
            actions.append(self.action())
        self.expect("RPAREN")
        self.expect("DOT")
        return ast.FlightRule(tuple(atoms), tuple(actions), start.pos)

    def clause(self):
        self.expect("LPAREN")
        tok = self.tok
        negated = False
        if tok.kind == "NOT" or (tok.kind == "IDENT" and tok.text == "Not"
                                 and self.peek().kind == "IDENT"):
            self.advance()
            negated = True
        name_tok = self.expect("IDENT")
        if not negated and self.tok.kind == "IDENT" and self.tok.text == "is":
            self.advance()
            qual = self.expect("QUALIFIER").text
            self.expect("RPAREN")
            return ast.FuzzyPredicate(name_tok.text, qual, name_tok.pos)
        if self.tok.kind != "RPAREN":
            self.fail(["RPAREN"] if negated else ["RPAREN", "'is'"])
        self.advance()
        return ast.ModePredicate(name_tok.text, negated, tok.pos)

    def action(self):
        tok = self.tok
        if tok.kind == "QUALIFIER":
            self.advance()
            return ast.FuzzyAction(tok.text, self.expect("IDENT").text, tok.pos)
        if tok.kind == "IDENT" and tok.text in ACTION_WORDS:
            self.advance()
            target = self.expect("IDENT").text
            if tok.text == "signal":
                return ast.SignalAction(target, tok.pos)
            if tok.text == "enable":
                return ast.EnableAction(target, tok.pos)
            return ast.ModeAction(tok.text, target, tok.pos)
        self.fail(["QUALIFIER"] + [f"'{w}'" for w in ACTION_WORDS])


def parse_tokens(tokens: list[Token]) -> ast.RuleAst:
    p = Parser(tokens)
    tree = p.parse_file()
    if p.diagnostics:
        raise RuleSyntaxError(p.diagnostics)
    return tree


def parse(source) -> ast.RuleAst:
    """Tokenize and parse rule text (str or bytes)."""
    return parse_tokens(tokenize(source))
