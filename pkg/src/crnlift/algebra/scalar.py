"""Elements of the rational function field Q(k) in the rate parameters."""

from __future__ import annotations

from functools import reduce
from math import gcd as igcd
from typing import Mapping

from gmpy2 import mpq, mpz

from .polys import ONE as P_ONE, ZERO as P_ZERO, ParamPoly, gcd


def _normalize(num: ParamPoly, den: ParamPoly) -> "ParamScalar":
    # num/den already coprime as polynomials; fix the rational scaling so that
    # both are integral, jointly primitive and den has a positive leading coefficient
    if not num.terms:
        return ZERO
    coeffs = list(num.terms.values()) + list(den.terms.values())
    l = reduce(lambda x, y: x * y // igcd(x, y), (int(c.denominator) for c in coeffs))
    g = reduce(igcd, (int(c.numerator) for c in coeffs))
    f = mpq(l, g)
    if den.canonical_leading()[1] < 0:
        f = -f
    if f != 1:
        num = ParamPoly({m: c * f for m, c in num.terms.items()})
        den = ParamPoly({m: c * f for m, c in den.terms.items()})
    return ParamScalar(num, den)


class ParamScalar:
    """Reduced fraction ``num/den`` of parameter polynomials.

    Canonical form: gcd(num, den) = 1, both integral with jointly coprime
    integer coefficients, and den has positive leading coefficient under the
    canonical parameter order.  Zero is ``0/1``.  Equality is structural.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: ParamPoly, den: ParamPoly = P_ONE):
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def make(cls, num: ParamPoly, den: ParamPoly = P_ONE) -> "ParamScalar":
        """Reduce an arbitrary fraction to canonical form."""
        if not den.terms:
            raise ZeroDivisionError("zero denominator")
        if not num.terms:
            return ZERO
        if not den.is_constant():
            g = gcd(num, den)
            if not g.is_constant():
                num = num / g
                den = den / g
        return _normalize(num, den)

    @classmethod
    def const(cls, c) -> "ParamScalar":
        return cls.make(ParamPoly.const(c))

    @classmethod
    def symbol(cls, name: str) -> "ParamScalar":
        return cls(ParamPoly.symbol(name), P_ONE)

    @classmethod
    def from_poly(cls, p: ParamPoly) -> "ParamScalar":
        return cls.make(p, P_ONE)

    # predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num.terms

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def symbols(self) -> set[str]:
        return self.num.symbols() | self.den.symbols()

    def is_reduced(self) -> bool:
        """Re-derive the canonical form and compare."""
        if self.is_zero():
            return self.den.is_one()
        return ParamScalar.make(self.num, self.den) == self

    def has_positive_coefficients(self) -> bool:
        return all(c > 0 for c in self.num.terms.values()) and all(
            c > 0 for c in self.den.terms.values()
        )

    # arithmetic -------------------------------------------------------
    def __add__(self, other) -> "ParamScalar":
        if not isinstance(other, ParamScalar):
            other = ParamScalar.const(other)
        a, b = self.num, self.den
        c, d = other.num, other.den
        if not a.terms:
            return other
        if not c.terms:
            return self
        if b == d:
            if b.is_constant():
                return _normalize(a + c, b) if (a + c).terms else ZERO
            n = a + c
            if not n.terms:
                return ZERO
            return ParamScalar.make(n, b)
        if b.is_constant() and d.is_constant():
            n = a * d + c * b
            return _normalize(n, b * d) if n.terms else ZERO
        g = gcd(b, d)
        if g.is_constant():
            n = a * d + c * b
            if not n.terms:
                return ZERO
            return _normalize(n, b * d)
        bg, dg = b / g, d / g
        t = a * dg + c * bg
        if not t.terms:
            return ZERO
        g2 = gcd(t, g)
        if not g2.is_constant():
            t = t / g2
            g = g / g2
        return _normalize(t, bg * dg * g)

    __radd__ = __add__

    def __neg__(self) -> "ParamScalar":
        if not self.num.terms:
            return self
        return ParamScalar(-self.num, self.den)

    def __sub__(self, other) -> "ParamScalar":
        if not isinstance(other, ParamScalar):
            other = ParamScalar.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "ParamScalar":
        return ParamScalar.const(other) - self

    def __mul__(self, other) -> "ParamScalar":
        if not isinstance(other, ParamScalar):
            if isinstance(other, ParamPoly):
                other = ParamScalar.from_poly(other)
            else:
                other = ParamScalar.const(other)
        a, b = self.num, self.den
        c, d = other.num, other.den
        if not a.terms or not c.terms:
            return ZERO
        if b.is_constant() and d.is_constant():
            return _normalize(a * c, b * d)
        g1 = gcd(a, d) if not d.is_constant() else P_ONE
        g2 = gcd(c, b) if not b.is_constant() else P_ONE
        if not g1.is_constant():
            a = a / g1
            d = d / g1
        if not g2.is_constant():
            c = c / g2
            b = b / g2
        return _normalize(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> "ParamScalar":
        if not self.num.terms:
            raise ZeroDivisionError("division by zero in Q(k)")
        return _normalize(self.den, self.num)

    def __truediv__(self, other) -> "ParamScalar":
        if not isinstance(other, ParamScalar):
            other = ParamScalar.const(other)
        if not other.num.terms:
            raise ZeroDivisionError("division by zero in Q(k)")
        return self * other.inverse()

    def __rtruediv__(self, other) -> "ParamScalar":
        return ParamScalar.const(other) / self

    def __pow__(self, n: int) -> "ParamScalar":
        if n < 0:
            return self.inverse() ** (-n)
        return ParamScalar(self.num ** n, self.den ** n) if n != 1 else self

    # comparison -------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, ParamScalar):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, mpq, mpz)):
            return self == ParamScalar.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # calculus / evaluation ----------------------------------------------
    def diff(self, name: str) -> "ParamScalar":
        """Formal partial derivative by the quotient rule, re-reduced."""
        dn = self.num.diff(name)
        dd = self.den.diff(name)
        if not dd.terms:
            return ParamScalar.make(dn, self.den) if dn.terms else ZERO
        n = dn * self.den - self.num * dd
        if not n.terms:
            return ZERO
        return ParamScalar.make(n, self.den * self.den)

    def evaluate(self, values: Mapping[str, object]) -> mpq:
        d = self.den.evaluate(values)
        if not d:
            raise ZeroDivisionError("denominator vanishes at evaluation point")
        return self.num.evaluate(values) / d

    def substitute(self, images: Mapping[str, "ParamScalar"]) -> "ParamScalar":
        """Replace parameter symbols by field elements."""
        if not images or not (self.symbols() & images.keys()):
            return self
        n = self.num.substitute(images, ONE, ParamScalar.from_poly)
        d = self.den.substitute(images, ONE, ParamScalar.from_poly)
        return n / d

    # printing -----------------------------------------------------------
    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        n, d = str(self.num), str(self.den)
        if len(self.num.terms) > 1:
            n = f"({n})"
        if not _is_atom(self.den):
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self) -> str:
        return f"ParamScalar({self})"


def _is_atom(p: ParamPoly) -> bool:
    if len(p.terms) != 1:
        return False
    (m, c), = p.terms.items()
    if not m:
        return c > 0 and c.denominator == 1
    return c == 1 and sum(m) == 1


ZERO = ParamScalar(P_ZERO, P_ONE)
ONE = ParamScalar(P_ONE, P_ONE)
