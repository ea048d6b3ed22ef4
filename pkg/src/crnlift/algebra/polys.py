"""Sparse multivariate polynomials over Q in named parameter symbols.

Monomials are dense exponent tuples indexed by a process-wide symbol
registry, with trailing zeros trimmed.  Python's native tuple comparison on
trimmed tuples is then a lexicographic monomial order, which the exact
division and gcd routines use internally.  The canonical order used for
printing and sign normalization is grevlex on symbols sorted by name
(alphabetic prefix, then numeric suffix), so output does not depend on the
order in which symbols were first seen.
"""

from __future__ import annotations

import re
from functools import reduce
from math import gcd as igcd
from operator import add
from typing import Iterable, Mapping

from gmpy2 import mpq, mpz

Mono = tuple  # tuple[int, ...]

_NAMES: list[str] = []
_IDS: dict[str, int] = {}
_CANON: dict[Mono, tuple] = {}
_ORDER_IDS: list[int] = []  # ids sorted by descending canonical rank (last = smallest)

_NAME_RE = re.compile(r"^([A-Za-z_]+?)(\d*)$")


def _natural_key(name: str):
    m = _NAME_RE.match(name)
    if m and m.group(2):
        return (m.group(1), int(m.group(2)), name)
    return (name, -1, name)


def symbol_id(name: str) -> int:
    """Return the registry index of a parameter symbol, registering it if new."""
    i = _IDS.get(name)
    if i is None:
        if not name or not (name[0].isalpha() or name[0] == "_"):
            raise ValueError(f"invalid symbol name {name!r}")
        i = len(_NAMES)
        _NAMES.append(name)
        _IDS[name] = i
        _CANON.clear()
        _ORDER_IDS[:] = sorted(range(len(_NAMES)), key=lambda j: _natural_key(_NAMES[j]))
    return i


def symbol_name(i: int) -> str:
    return _NAMES[i]


def symbol_sort_key(name: str):
    """Sort key placing symbols in canonical (natural) order."""
    return _natural_key(name)


def _trim(m: Iterable[int]) -> Mono:
    t = list(m)
    while t and t[-1] == 0:
        t.pop()
    return tuple(t)


def mono_mul(a: Mono, b: Mono) -> Mono:
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return a
    return tuple(map(add, a, b)) + a[len(b):]


def mono_divides(b: Mono, a: Mono) -> bool:
    if len(b) > len(a):
        return False
    for x, y in zip(b, a):
        if x > y:
            return False
    return True


def mono_div(a: Mono, b: Mono) -> Mono:
    if not b:
        return a
    r = list(a)
    for i, e in enumerate(b):
        r[i] -= e
    while r and r[-1] == 0:
        r.pop()
    return tuple(r)


def mono_gcd(a: Mono, b: Mono) -> Mono:
    return _trim(map(min, a, b))


def canonical_key(m: Mono) -> tuple:
    """Grevlex key (larger is greater) in the name-sorted symbol order."""
    k = _CANON.get(m)
    if k is None:
        n = len(m)
        tail = tuple(-m[i] if i < n else 0 for i in reversed(_ORDER_IDS))
        k = (sum(m),) + tail
        _CANON[m] = k
    return k


def _as_mpq(c) -> mpq:
    if isinstance(c, mpq):
        return c
    if isinstance(c, str):
        return mpq(c)
    if hasattr(c, "numerator") and hasattr(c, "denominator"):
        return mpq(int(c.numerator), int(c.denominator))
    return mpq(c)


class ParamPoly:
    """Immutable polynomial in parameter symbols with rational coefficients.

    ``terms`` maps trimmed exponent tuples to nonzero ``mpq`` coefficients.
    Construct through the classmethods; the bare constructor trusts its
    input.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: dict | None = None):
        self.terms = terms if terms is not None else {}
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def const(cls, c) -> "ParamPoly":
        c = _as_mpq(c)
        return cls({(): c}) if c else cls({})

    @classmethod
    def symbol(cls, name: str) -> "ParamPoly":
        i = symbol_id(name)
        return cls({(0,) * i + (1,): mpq(1)})

    @classmethod
    def from_terms(cls, items: Iterable[tuple[Mapping[str, int], object]]) -> "ParamPoly":
        """Build from ``({name: exp}, coeff)`` pairs; like terms are summed."""
        out: dict = {}
        for powers, c in items:
            v = [0] * (max((symbol_id(s) for s in powers), default=-1) + 1)
            for s, e in powers.items():
                if e < 0:
                    raise ValueError("negative exponent")
                v[symbol_id(s)] += e
            m = _trim(v)
            val = out.get(m, 0) + _as_mpq(c)
            if val:
                out[m] = val
            else:
                out.pop(m, None)
        return cls(out)

    # predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        t = self.terms
        return not t or (len(t) == 1 and () in t)

    def is_one(self) -> bool:
        t = self.terms
        return len(t) == 1 and t.get(()) == 1

    def constant_value(self) -> mpq:
        return self.terms.get((), mpq(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def variables(self) -> set[int]:
        s: set[int] = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    s.add(i)
        return s

    def symbols(self) -> set[str]:
        return {_NAMES[i] for i in self.variables()}

    def degree_in(self, i: int) -> int:
        return max((m[i] if i < len(m) else 0 for m in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    # arithmetic -------------------------------------------------------
    def __add__(self, other: "ParamPoly") -> "ParamPoly":
        if not isinstance(other, ParamPoly):
            other = ParamPoly.const(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        a, b = (self.terms, other.terms) if len(self.terms) >= len(other.terms) else (other.terms, self.terms)
        out = dict(a)
        for m, c in b.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return ParamPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "ParamPoly":
        return ParamPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "ParamPoly") -> "ParamPoly":
        if not isinstance(other, ParamPoly):
            other = ParamPoly.const(other)
        if not other.terms:
            return self
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = -c
            else:
                v = v - c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return ParamPoly(out)

    def __rsub__(self, other) -> "ParamPoly":
        return ParamPoly.const(other) - self

    def scale(self, c) -> "ParamPoly":
        c = _as_mpq(c)
        if not c:
            return ZERO
        if c == 1:
            return self
        return ParamPoly({m: v * c for m, v in self.terms.items()})

    def mul_term(self, mono: Mono, c) -> "ParamPoly":
        if not c:
            return ZERO
        return ParamPoly({mono_mul(m, mono): v * c for m, v in self.terms.items()})

    def __mul__(self, other: "ParamPoly") -> "ParamPoly":
        if not isinstance(other, ParamPoly):
            return self.scale(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return ZERO
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (mb, cb), = b.items()
            if not mb:
                return ParamPoly({m: c * cb for m, c in a.items()})
            return ParamPoly({mono_mul(m, mb): c * cb for m, c in a.items()})
        out: dict = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = mono_mul(ma, mb)
                v = get(m)
                out[m] = ca * cb if v is None else v + ca * cb
        return ParamPoly({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ParamPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # comparison -------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, ParamPoly):
            return self.terms == other.terms
        if isinstance(other, (int, mpq, mpz)):
            return self.terms == ({(): mpq(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # orders -------------------------------------------------------------
    def lex_leading(self) -> tuple[Mono, mpq]:
        m = max(self.terms)
        return m, self.terms[m]

    def canonical_leading(self) -> tuple[Mono, mpq]:
        m = max(self.terms, key=canonical_key)
        return m, self.terms[m]

    def sorted_terms(self) -> list[tuple[Mono, mpq]]:
        return sorted(self.terms.items(), key=lambda t: canonical_key(t[0]), reverse=True)

    # content ----------------------------------------------------------
    def numeric_content(self) -> mpq:
        """Positive rational c with ``self / c`` integral and primitive."""
        if not self.terms:
            return mpq(1)
        nums = [int(c.numerator) for c in self.terms.values()]
        dens = [int(c.denominator) for c in self.terms.values()]
        g = reduce(igcd, nums)
        l = reduce(lambda x, y: x * y // igcd(x, y), dens)
        return mpq(abs(g), l)

    def primitive(self) -> "ParamPoly":
        """Integral primitive associate with positive canonical leading coefficient."""
        if not self.terms:
            return self
        c = self.numeric_content()
        if self.canonical_leading()[1] < 0:
            c = -c
        if c == 1:
            return self
        inv = 1 / c
        return ParamPoly({m: v * inv for m, v in self.terms.items()})

    def monomial_content(self) -> Mono:
        it = iter(self.terms)
        g = next(it)
        for m in it:
            if not g:
                break
            g = mono_gcd(g, m)
        return g

    # division ---------------------------------------------------------
    def exact_div(self, q: "ParamPoly") -> "ParamPoly | None":
        """Quotient ``self / q`` if it is a polynomial, else ``None``."""
        if not q.terms:
            raise ZeroDivisionError("polynomial division by zero")
        if not self.terms:
            return ZERO
        if len(q.terms) == 1:
            (mq, cq), = q.terms.items()
            inv = 1 / cq
            out = {}
            for m, c in self.terms.items():
                if not mono_divides(mq, m):
                    return None
                out[mono_div(m, mq)] = c * inv
            return ParamPoly(out)
        lmq = max(q.terms)
        if not mono_divides(lmq, max(self.terms)):
            return None
        inv = 1 / q.terms[lmq]
        rest = [(m, c) for m, c in q.terms.items() if m != lmq]
        r = dict(self.terms)
        quot = {}
        while r:
            m = max(r)
            if not mono_divides(lmq, m):
                return None
            t = mono_div(m, lmq)
            c = r.pop(m) * inv
            quot[t] = c
            for mq, cq in rest:
                mm = mono_mul(t, mq)
                v = r.get(mm)
                if v is None:
                    r[mm] = -c * cq
                else:
                    v = v - c * cq
                    if v:
                        r[mm] = v
                    else:
                        del r[mm]
        return ParamPoly(quot)

    def __truediv__(self, q) -> "ParamPoly":
        if not isinstance(q, ParamPoly):
            return self.scale(1 / _as_mpq(q))
        r = self.exact_div(q)
        if r is None:
            raise ArithmeticError("inexact polynomial division")
        return r

    # calculus / evaluation ----------------------------------------------
    def diff(self, name: str) -> "ParamPoly":
        i = symbol_id(name)
        out = {}
        for m, c in self.terms.items():
            if i < len(m) and m[i]:
                e = m[i]
                nm = list(m)
                nm[i] -= 1
                out[_trim(nm)] = c * e
        return ParamPoly(out)

    def evaluate(self, values: Mapping[str, object]):
        """Evaluate at numeric values for every symbol that occurs."""
        total = 0
        for m, c in self.terms.items():
            t = c
            for i, e in enumerate(m):
                if e:
                    t = t * _as_mpq(values[_NAMES[i]]) ** e
            total = total + t
        return mpq(total)

    def substitute(self, images: Mapping[str, object], one, make_const):
        """Replace symbols by ring elements; ``images`` values must support + and *.

        Unmapped symbols are kept as symbols converted through ``make_const``.
        """
        total = None
        powers: dict = {}
        for m, c in self.terms.items():
            t = make_const(ParamPoly.const(c))
            for i, e in enumerate(m):
                if not e:
                    continue
                name = _NAMES[i]
                key = (name, e)
                p = powers.get(key)
                if p is None:
                    base = images[name] if name in images else make_const(ParamPoly.symbol(name))
                    p = base ** e if e > 1 else base
                    powers[key] = p
                t = t * p
            total = t if total is None else total + t
        return total if total is not None else make_const(ZERO)

    # printing -----------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = _mono_str(m)
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = _num_str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_num_str(a)}*{mono}"
            parts.append(("-" if neg else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self) -> str:
        return f"ParamPoly({self})"


def _num_str(c: mpq) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _mono_str(m: Mono) -> str:
    items = [(i, e) for i, e in enumerate(m) if e]
    items.sort(key=lambda t: _natural_key(_NAMES[t[0]]))
    return "*".join(_NAMES[i] if e == 1 else f"{_NAMES[i]}^{e}" for i, e in items)


ZERO = ParamPoly({})
ONE = ParamPoly({(): mpq(1)})


# gcd ------------------------------------------------------------------------

def _univariate(p: ParamPoly, v: int) -> dict[int, ParamPoly]:
    out: dict[int, dict] = {}
    for m, c in p.terms.items():
        if v < len(m) and m[v]:
            e = m[v]
            nm = list(m)
            nm[v] = 0
            while nm and nm[-1] == 0:
                nm.pop()
            out.setdefault(e, {})[tuple(nm)] = c
        else:
            out.setdefault(0, {})[m] = c
    return {e: ParamPoly(t) for e, t in out.items()}


def _from_univariate(u: Mapping[int, ParamPoly], v: int) -> ParamPoly:
    out = {}
    for e, c in u.items():
        if e == 0:
            out.update(c.terms)
            continue
        unit = (0,) * v + (e,)
        for m, x in c.terms.items():
            out[mono_mul(m, unit)] = x
    return ParamPoly(out)


def _content_in(p: ParamPoly, v: int) -> ParamPoly:
    coeffs = sorted(_univariate(p, v).values(), key=lambda c: len(c.terms))
    g = coeffs[0].primitive()
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = gcd(g, c)
    return g


def _prem(a: dict[int, ParamPoly], b: dict[int, ParamPoly]) -> dict[int, ParamPoly]:
    db = max(b)
    lb = b[db]
    r = dict(a)
    while r and max(r) >= db:
        dr = max(r)
        lr = r[dr]
        shift = dr - db
        r = {d: c * lb for d, c in r.items()}
        for d, c in b.items():
            k = d + shift
            val = r.get(k, ZERO) - lr * c
            if val.terms:
                r[k] = val
            else:
                r.pop(k, None)
    return r


def _primitive_in(u: dict[int, ParamPoly]) -> dict[int, ParamPoly]:
    coeffs = sorted(u.values(), key=lambda c: len(c.terms))
    g = coeffs[0].primitive()
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = gcd(g, c)
    if g.is_constant():
        return u
    return {e: c / g for e, c in u.items()}


def gcd(p: ParamPoly, q: ParamPoly) -> ParamPoly:
    """Greatest common divisor, integral and primitive with positive leading coefficient.

    Primitive polynomial remainder sequences, recursive in the variables.
    ``gcd(0, q)`` is the normalized ``q``; ``gcd(0, 0)`` is 0.
    """
    if not p.terms:
        return q.primitive()
    if not q.terms:
        return p.primitive()
    if p.is_constant() or q.is_constant():
        return ONE
    if p == q:
        return p.primitive()
    mp, mq = p.monomial_content(), q.monomial_content()
    mg = mono_gcd(mp, mq) if mp and mq else ()
    if mp:
        p = ParamPoly({mono_div(m, mp): c for m, c in p.terms.items()})
    if mq:
        q = ParamPoly({mono_div(m, mq): c for m, c in q.terms.items()})
    g = _gcd_nomono(p, q)
    if mg:
        g = ParamPoly({mono_mul(m, mg): c for m, c in g.terms.items()})
    return g


def _gcd_nomono(p: ParamPoly, q: ParamPoly) -> ParamPoly:
    # p, q have no monomial content
    if p.is_constant() or q.is_constant():
        return ONE
    vp, vq = p.variables(), q.variables()
    common = vp & vq
    if not common:
        return ONE
    only_p = vp - common
    if only_p:
        p = _content_in(p, min(only_p))
        return gcd(p, q)
    only_q = vq - common
    if only_q:
        q = _content_in(q, min(only_q))
        return gcd(p, q)
    if len(p.terms) <= len(q.terms):
        small, big = p, q
    else:
        small, big = q, p
    if big.exact_div(small) is not None:
        return small.primitive()
    v = min(common, key=lambda i: (max(p.degree_in(i), q.degree_in(i)), i))
    up, uq = _univariate(p, v), _univariate(q, v)
    cp = _content_in(p, v)
    cq = _content_in(q, v)
    c = gcd(cp, cq)
    if not cp.is_constant():
        up = {e: x / cp for e, x in up.items()}
    if not cq.is_constant():
        uq = {e: x / cq for e, x in uq.items()}
    a, b = (up, uq) if max(up) >= max(uq) else (uq, up)
    while True:
        r = _prem(a, b)
        if not r:
            break
        if max(r) == 0:
            return c
        a, b = b, _primitive_in(r)
    g = _from_univariate(_primitive_in(b), v).primitive()
    return (g * c).primitive() if not c.is_one() else g


def lcm(p: ParamPoly, q: ParamPoly) -> ParamPoly:
    if not p.terms or not q.terms:
        return ZERO
    return (p * q / gcd(p, q)).primitive()
