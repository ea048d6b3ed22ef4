"""Polynomials in concentration variables with coefficients in Q(k)."""

from __future__ import annotations

from operator import add
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .polys import ParamPoly
from .scalar import ONE as S_ONE, ZERO as S_ZERO, ParamScalar


class VariableMismatch(ValueError):
    pass


def _coerce(c) -> ParamScalar:
    if isinstance(c, ParamScalar):
        return c
    if isinstance(c, ParamPoly):
        return ParamScalar.from_poly(c)
    return ParamScalar.const(c)


class XPoly:
    """Sparse polynomial over a declared, ordered variable list.

    Exponents are dense tuples aligned with ``variables``; coefficients are
    nonzero :class:`ParamScalar` values.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: dict | None = None):
        self.variables = tuple(variables)
        self.terms = terms if terms is not None else {}

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "XPoly":
        return cls(variables, {})

    @classmethod
    def constant(cls, variables: Sequence[str], c) -> "XPoly":
        c = _coerce(c)
        n = len(variables)
        return cls(variables, {(0,) * n: c} if not c.is_zero() else {})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "XPoly":
        variables = tuple(variables)
        if name not in variables:
            raise VariableMismatch(f"unknown variable {name!r}")
        e = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {e: S_ONE})

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Sequence[int], c=1) -> "XPoly":
        c = _coerce(c)
        return cls(variables, {tuple(exps): c} if not c.is_zero() else {})

    @classmethod
    def from_terms(cls, variables: Sequence[str], items: Iterable[tuple[Sequence[int], object]]) -> "XPoly":
        out: dict = {}
        for e, c in items:
            e = tuple(e)
            c = _coerce(c)
            v = out.get(e)
            v = c if v is None else v + c
            if v.is_zero():
                out.pop(e, None)
            else:
                out[e] = v
        return cls(variables, out)

    # basic properties ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, exps: Sequence[int]) -> ParamScalar:
        return self.terms.get(tuple(exps), S_ZERO)

    def support_variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            for v, k in zip(self.variables, e):
                if k:
                    used.add(v)
        return used

    def parameters(self) -> set[str]:
        s: set[str] = set()
        for c in self.terms.values():
            s |= c.symbols()
        return s

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def _check(self, other: "XPoly") -> None:
        if self.variables != other.variables:
            raise VariableMismatch(f"{self.variables} vs {other.variables}")

    # arithmetic -------------------------------------------------------
    def __add__(self, other) -> "XPoly":
        if not isinstance(other, XPoly):
            other = XPoly.constant(self.variables, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v.is_zero():
                    del out[e]
                else:
                    out[e] = v
        return XPoly(self.variables, out)

    __radd__ = __add__

    def __neg__(self) -> "XPoly":
        return XPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "XPoly":
        if not isinstance(other, XPoly):
            other = XPoly.constant(self.variables, other)
        return self + (-other)

    def __rsub__(self, other) -> "XPoly":
        return (-self) + other

    def scale(self, c) -> "XPoly":
        c = _coerce(c)
        if c.is_zero():
            return XPoly(self.variables, {})
        if c.is_one():
            return self
        return XPoly(self.variables, {e: v * c for e, v in self.terms.items()})

    def mul_term(self, exps: Sequence[int], c) -> "XPoly":
        c = _coerce(c)
        if c.is_zero():
            return XPoly(self.variables, {})
        exps = tuple(exps)
        return XPoly(self.variables, {tuple(map(add, e, exps)): v * c for e, v in self.terms.items()})

    def __mul__(self, other) -> "XPoly":
        if not isinstance(other, XPoly):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(map(add, e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return XPoly(self.variables, {e: c for e, c in out.items() if not c.is_zero()})

    def __rmul__(self, other) -> "XPoly":
        return self.scale(other)

    def __pow__(self, n: int) -> "XPoly":
        result = XPoly.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, c) -> "XPoly":
        c = _coerce(c)
        return self.scale(c.inverse())

    def __eq__(self, other) -> bool:
        if not isinstance(other, XPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # maps -------------------------------------------------------------
    def map_coefficients(self, fn) -> "XPoly":
        out = {}
        for e, c in self.terms.items():
            v = fn(c)
            if not v.is_zero():
                out[e] = v
        return XPoly(self.variables, out)

    def with_variables(self, variables: Sequence[str]) -> "XPoly":
        """Re-embed into another variable list containing every used variable."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        idx = []
        for i, v in enumerate(self.variables):
            if v in pos:
                idx.append((i, pos[v]))
        out = {}
        n = len(variables)
        for e, c in self.terms.items():
            ne = [0] * n
            for i, k in enumerate(e):
                if k:
                    if self.variables[i] not in pos:
                        raise VariableMismatch(f"variable {self.variables[i]!r} is not in the target ring")
                    ne[pos[self.variables[i]]] = k
            out[tuple(ne)] = c
        return XPoly(variables, out)

    def substitute(self, assignment: Mapping[str, object]) -> "XPoly":
        """Compose: replace variables by XPoly (same variable list) or scalars."""
        for name in assignment:
            if name not in self.variables:
                raise VariableMismatch(f"assignment references unknown variable {name!r}")
        images = []
        for v in self.variables:
            if v in assignment:
                img = assignment[v]
                if not isinstance(img, XPoly):
                    img = XPoly.constant(self.variables, img)
                else:
                    self._check(img)
                images.append(img)
            else:
                images.append(None)
        result = XPoly(self.variables, {})
        cache: dict = {}
        n = len(self.variables)
        for e, c in self.terms.items():
            keep = [0] * n
            term = None
            for i, k in enumerate(e):
                if not k:
                    continue
                if images[i] is None:
                    keep[i] = k
                else:
                    p = cache.get((i, k))
                    if p is None:
                        p = images[i] ** k
                        cache[(i, k)] = p
                    term = p if term is None else term * p
            base = XPoly(self.variables, {tuple(keep): c})
            result = result + (base if term is None else base * term)
        return result

    def diff(self, name: str) -> "XPoly":
        i = self.variables.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return XPoly(self.variables, out)

    def evaluate(self, point: Mapping[str, object], params: Mapping[str, object] | None = None):
        """Numeric value at ``point`` (variables) and ``params`` (symbols)."""
        params = params or {}
        total = mpq(0)
        vals = [mpq(point[v]) if not isinstance(point[v], mpq) else point[v] for v in self.variables]
        for e, c in self.terms.items():
            t = c.evaluate(params) if not c.is_constant() else c.num.constant_value() / c.den.constant_value()
            for x, k in zip(vals, e):
                if k:
                    t = t * x ** k
            total += t
        return total

    def evaluate_float(self, point: Mapping[str, float], params: Mapping[str, float]) -> float:
        total = 0.0
        vals = [float(point[v]) for v in self.variables]
        for e, c in self.terms.items():
            t = _float_eval(c.num, params) / _float_eval(c.den, params)
            for x, k in zip(vals, e):
                if k:
                    t *= x ** k
            total += t
        return total

    # printing -----------------------------------------------------------
    def sorted_terms(self, order=None) -> list:
        if order is None:
            from ..groebner.orders import grevlex
            order = grevlex(self.variables)
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def to_str(self, order=None) -> str:
        if not self.terms:
            return "0"
        out = []
        for e, c in self.sorted_terms(order):
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            neg = _looks_negative(c)
            a = -c if neg else c
            if not mono:
                body = str(a)
                if len(a.num.terms) > 1 and not a.den.is_one():
                    body = f"({body})"
            elif a.is_one():
                body = mono
            else:
                s = str(a)
                if len(a.num.terms) > 1 or not a.den.is_one():
                    s = f"({s})"
                body = f"{s}*{mono}"
            out.append(("-" if neg else "+", body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"XPoly({self})"


def _looks_negative(c: ParamScalar) -> bool:
    return len(c.num.terms) == 1 and next(iter(c.num.terms.values())) < 0


def _float_eval(p: ParamPoly, params: Mapping[str, float]) -> float:
    from .polys import symbol_name

    total = 0.0
    for m, c in p.terms.items():
        t = float(c)
        for i, e in enumerate(m):
            if e:
                t *= float(params[symbol_name(i)]) ** e
        total += t
    return total
