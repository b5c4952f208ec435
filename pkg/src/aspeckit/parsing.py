"""Recursive-descent parser for polynomial expressions and scalar literals.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := ['-'] factor ('*' factor)*
    factor := atom ['^' uint]
    atom   := scalar | ident | '(' expr ')'

A scalar is an integer or ``a/b``.  Over QQ(i) the identifier ``i`` is the
imaginary unit.  Products must be written with ``*``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import NamedTuple

from .errors import ExprSyntaxError, UnknownGenerator
from .ncalgebra import NcPoly, Presentation
from .scalars import QQI, Field

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()])|(?P<bad>\S))")


class Token(NamedTuple):
    kind: str  # num, ident, op, end
    text: str
    column: int  # 1-based


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        kind = m.lastgroup
        col = m.start(kind) + 1
        if kind == "bad":
            raise ExprSyntaxError(f"unexpected character {m.group(kind)!r}", col)
        tokens.append(Token(kind, m.group(kind), col))
        pos = m.end()
    tokens.append(Token("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, field: Field, gens: tuple):
        self.tokens = tokenize(text)
        self.pos = 0
        self.field = field
        self.gens = gens

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def error(self, message=None):
        t = self.tok
        if message is None:
            message = "unexpected end of input" if t.kind == "end" else f"unexpected {t.text!r}"
        raise ExprSyntaxError(message, t.column)

    def const(self, c) -> NcPoly:
        return NcPoly.const(c, self.field, self.gens)

    def parse(self) -> NcPoly:
        p = self.expr()
        if self.tok.kind != "end":
            self.error()
        return p

    def expr(self) -> NcPoly:
        p = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> NcPoly:
        negate = False
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            negate = True
        p = self.factor()
        while self.tok.kind == "op" and self.tok.text == "*":
            self.advance()
            p = p * self.factor()
        return -p if negate else p

    def factor(self) -> NcPoly:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            t = self.tok
            if t.kind != "num" or "/" in t.text:
                self.error("expected a nonnegative integer exponent")
            self.advance()
            base = base ** int(t.text)
        return base

    def atom(self) -> NcPoly:
        t = self.tok
        if t.kind == "num":
            self.advance()
            num, _, den = t.text.partition("/")
            if den and int(den) == 0:
                raise ExprSyntaxError("zero denominator", t.column)
            return self.const(Fraction(int(num), int(den or 1)))
        if t.kind == "ident":
            self.advance()
            if t.text in self.gens:
                return NcPoly.gen(self.gens.index(t.text), self.field, self.gens)
            if t.text == "i" and self.field == QQI:
                return self.const(QQI.i)
            raise UnknownGenerator(f"unknown generator {t.text!r} at column {t.column}")
        if t.kind == "op" and t.text == "(":
            self.advance()
            p = self.expr()
            if not (self.tok.kind == "op" and self.tok.text == ")"):
                self.error("expected ')'")
            self.advance()
            return p
        self.error()


def parse_expr(text: str, presentation: Presentation) -> NcPoly:
    """Parse ``text`` into a polynomial over the generators of ``presentation``."""
    return _Parser(text, presentation.field, presentation.generators).parse()


def parse_scalar(text, field: Field):
    """Parse a scalar literal such as ``-3``, ``1/2`` or ``1/2+3/4*i``."""
    if isinstance(text, int) and not isinstance(text, bool):
        return field(text)
    if not isinstance(text, str):
        raise ExprSyntaxError(f"scalar literal must be a string, got {text!r}", 1)
    p = _Parser(text, field, ()).parse()
    return p.coefficient(())
