"""Reader for the canonical text form of ParamScalar and XPoly values.

Accepts ``+ - * / ^`` (``**`` too), parentheses, integer and decimal-free
rational literals, and identifiers.  Identifiers listed in ``variables``
become polynomial variables; every other identifier is a parameter symbol.
Division is only allowed by expressions free of variables.
"""

from __future__ import annotations

import re
from typing import Sequence

from .scalar import ParamScalar
from .xpoly import XPoly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


class ExpressionError(ValueError):
    pass


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExpressionError(f"unexpected character at column {pos + 1}: {text[pos:pos + 10]!r}")
        if m.group(1):
            out.append(("num", m.group(1)))
        elif m.group(2):
            out.append(("id", m.group(2)))
        else:
            op = m.group(3)
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, variables):
        self.toks = tokens
        self.i = 0
        self.vars = tuple(variables)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, value=None):
        t = self.peek()
        if t[0] is None or (value is not None and t[1] != value):
            raise ExpressionError(f"expected {value or 'token'} at token {self.i + 1}")
        self.i += 1
        return t

    def expr(self) -> XPoly:
        v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            r = self.term()
            v = v + r if op == "+" else v - r
        return v

    def term(self) -> XPoly:
        v = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            r = self.unary()
            if op == "*":
                v = v * r
            else:
                if any(any(e) for e in r.terms) or r.is_zero():
                    raise ExpressionError("division by a non-constant or zero expression")
                c = next(iter(r.terms.values()))
                v = v.scale(c.inverse())
        return v

    def unary(self) -> XPoly:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> XPoly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ExpressionError("exponent must be a non-negative integer")
            return base ** int(val)
        return base

    def atom(self) -> XPoly:
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return XPoly.constant(self.vars, int(val))
        if kind == "id":
            self.take()
            if val in self.vars:
                return XPoly.var(self.vars, val)
            return XPoly.constant(self.vars, ParamScalar.symbol(val))
        if val == "(":
            self.take()
            v = self.expr()
            self.take(")")
            return v
        raise ExpressionError(f"unexpected token {val!r}")


def parse_xpoly(text: str, variables: Sequence[str]) -> XPoly:
    p = _Parser(_tokenize(text), variables)
    v = p.expr()
    if p.i != len(p.toks):
        raise ExpressionError(f"trailing input at token {p.i + 1}")
    return v


def parse_scalar(text: str) -> ParamScalar:
    v = parse_xpoly(text, ())
    return v.terms.get((), ParamScalar.const(0))
