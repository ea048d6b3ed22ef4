"""Division, S-polynomials and Buchberger's algorithm over Q(k).

Working polynomials are plain dicts ``exponent tuple -> ParamScalar``;
:class:`XPoly` is only used at the public boundary.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from operator import add, sub
from typing import Sequence

from ..algebra.scalar import ParamScalar
from ..algebra.xpoly import VariableMismatch, XPoly
from .orders import MonomialOrder

log = logging.getLogger(__name__)


class NotEliminationOrder(ValueError):
    pass


def _divides(a: tuple, b: tuple) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(map(max, a, b))


def _coprime(a: tuple, b: tuple) -> bool:
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def leading_monomial(f: XPoly, order: MonomialOrder) -> tuple:
    if not f.terms:
        raise ValueError("zero polynomial has no leading monomial")
    return max(f.terms, key=order.key)


def leading_term(f: XPoly, order: MonomialOrder) -> tuple[tuple, ParamScalar]:
    e = leading_monomial(f, order)
    return e, f.terms[e]


class _Elem:
    """A divisor: leading monomial, leading coefficient, remaining terms."""

    __slots__ = ("lm", "lc", "tail", "deg")

    def __init__(self, terms: dict, order: MonomialOrder):
        lm = max(terms, key=order.key)
        self.lm = lm
        self.lc = terms[lm]
        self.tail = [(e, c) for e, c in terms.items() if e != lm]
        self.deg = sum(lm)

    def terms(self) -> dict:
        d = dict(self.tail)
        d[self.lm] = self.lc
        return d


def _nkey(order: MonomialOrder, e: tuple) -> tuple:
    return tuple(-x for x in order.key(e))


def _reduce(terms: dict, basis: Sequence[_Elem], order: MonomialOrder,
            quotients: list | None = None, top_only: bool = False) -> dict:
    """Full normal form of ``terms`` modulo ``basis`` (first divisor in list order)."""
    if not terms or not basis:
        return dict(terms)
    p = dict(terms)
    cache: dict = {}

    def nk(e):
        k = cache.get(e)
        if k is None:
            k = cache[e] = _nkey(order, e)
        return k

    heap = [(nk(e), e) for e in p]
    heapq.heapify(heap)
    queued = set(p)
    rem: dict = {}
    while heap:
        _, e = heapq.heappop(heap)
        queued.discard(e)
        c = p.pop(e, None)
        if c is None:
            continue
        se = sum(e)
        for idx, g in enumerate(basis):
            if g.deg <= se and _divides(g.lm, e):
                break
        else:
            if top_only:
                rem[e] = c
                rem.update(p)
                return rem
            rem[e] = c
            continue
        factor = c if g.lc.is_one() else c / g.lc
        shift = tuple(map(sub, e, g.lm))
        if quotients is not None:
            q = quotients[idx]
            v = q.get(shift)
            q[shift] = factor if v is None else v + factor
        for ge, gc in g.tail:
            ne = tuple(map(add, ge, shift))
            t = factor * gc
            v = p.get(ne)
            if v is None:
                p[ne] = -t
                if ne not in queued:
                    queued.add(ne)
                    heapq.heappush(heap, (nk(ne), ne))
            else:
                v = v - t
                if v.is_zero():
                    del p[ne]
                else:
                    p[ne] = v
    return rem


def _monic(terms: dict, order: MonomialOrder) -> dict:
    lm = max(terms, key=order.key)
    lc = terms[lm]
    if lc.is_one():
        return terms
    inv = lc.inverse()
    return {e: (c * inv if e != lm else ParamScalar.const(1)) for e, c in terms.items()}


def _check_vars(polys: Sequence[XPoly], order: MonomialOrder) -> None:
    for f in polys:
        if f.variables != order.variables:
            raise VariableMismatch(f"polynomial variables {f.variables} differ from order variables {order.variables}")


def divide(f: XPoly, G: Sequence[XPoly], order: MonomialOrder) -> tuple[list[XPoly], XPoly]:
    """Multivariate division: ``f = sum q_i g_i + r``, no term of r divisible by any LM(g_i)."""
    _check_vars([f, *G], order)
    if any(g.is_zero() for g in G):
        raise ValueError("divisors must be nonzero")
    basis = [_Elem(g.terms, order) for g in G]
    quots: list[dict] = [{} for _ in G]
    rem = _reduce(f.terms, basis, order, quots)
    v = f.variables
    return [XPoly(v, {e: c for e, c in q.items() if not c.is_zero()}) for q in quots], XPoly(v, rem)


def remainder(f: XPoly, G: Sequence[XPoly], order: MonomialOrder) -> XPoly:
    _check_vars([f, *G], order)
    basis = [_Elem(g.terms, order) for g in G if g.terms]
    return XPoly(f.variables, _reduce(f.terms, basis, order))


def _spoly(f: _Elem, g: _Elem) -> dict:
    l = _lcm(f.lm, g.lm)
    sf = tuple(map(sub, l, f.lm))
    sg = tuple(map(sub, l, g.lm))
    a = f.lc.inverse()
    b = g.lc.inverse()
    out: dict = {}
    for e, c in f.tail:
        out[tuple(map(add, e, sf))] = c * a
    for e, c in g.tail:
        ne = tuple(map(add, e, sg))
        v = out.get(ne)
        t = c * b
        if v is None:
            out[ne] = -t
        else:
            v = v - t
            if v.is_zero():
                del out[ne]
            else:
                out[ne] = v
    return out


def s_polynomial(f: XPoly, g: XPoly, order: MonomialOrder) -> XPoly:
    """``lcm/LT(f) * f - lcm/LT(g) * g``."""
    _check_vars([f, g], order)
    if f.is_zero() or g.is_zero():
        raise ValueError("S-polynomial of a zero polynomial")
    return XPoly(f.variables, _spoly(_Elem(f.terms, order), _Elem(g.terms, order)))


@dataclass
class GroebnerBasis:
    order: MonomialOrder
    polys: list[XPoly]
    reduced: bool = False
    stats: dict = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def leading_monomials(self) -> list[tuple]:
        return [leading_monomial(g, self.order) for g in self.polys]

    def strings(self) -> list[str]:
        return [g.to_str(self.order) for g in self.polys]


def buchberger(gens: Sequence[XPoly], order: MonomialOrder, *, reduce: bool = True) -> GroebnerBasis:
    """Groebner basis of ``<gens>`` by Buchberger's algorithm.

    Normal selection strategy (smallest lcm under the order, ties broken by
    pair creation index), the coprime leading monomial criterion, and the
    Gebauer-Moeller chain criterion.  New elements are made monic on entry.
    """
    _check_vars(gens, order)
    gens = [g for g in gens if g.terms]
    elems: list[_Elem] = []
    active: list[bool] = []
    pairs: list = []  # heap of (key(lcm), serial, i, j)
    pending: dict = {}  # (i, j) -> lcm, for pairs still queued
    serial = 0
    stats = {"pairs": 0, "reductions_to_zero": 0, "coprime_skipped": 0, "chain_skipped": 0}

    def add_elem(terms: dict) -> None:
        nonlocal serial
        h = _Elem(_monic(terms, order), order)
        k = len(elems)
        # chain criterion on existing pairs
        for (i, j), l in list(pending.items()):
            if _divides(h.lm, l) and _lcm(elems[i].lm, h.lm) != l and _lcm(elems[j].lm, h.lm) != l:
                del pending[(i, j)]
                stats["chain_skipped"] += 1
        cand = []
        for i, g in enumerate(elems):
            if active[i]:
                cand.append((i, _lcm(g.lm, h.lm)))
        # keep only pairs whose lcm is not a proper multiple of another new lcm;
        # among equal lcms keep one, preferring a coprime pair
        kept = []
        for i, l in cand:
            if any(l2 != l and _divides(l2, l) for _, l2 in cand):
                stats["chain_skipped"] += 1
                continue
            kept.append((i, l))
        by_lcm: dict = {}
        for i, l in kept:
            if l not in by_lcm:
                by_lcm[l] = i
            elif _coprime(elems[i].lm, h.lm):
                by_lcm[l] = i
        for l, i in sorted(by_lcm.items(), key=lambda t: t[1]):
            if _coprime(elems[i].lm, h.lm):
                stats["coprime_skipped"] += 1
                continue
            pending[(i, k)] = l
            heapq.heappush(pairs, (order.key(l), serial, i, k))
            serial += 1
        for i, g in enumerate(elems):
            if active[i] and _divides(h.lm, g.lm):
                active[i] = False
        elems.append(h)
        active.append(True)

    for g in gens:
        add_elem(dict(g.terms))

    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        if pending.pop((i, j), None) is None:
            continue
        stats["pairs"] += 1
        s = _spoly(elems[i], elems[j])
        if not s:
            stats["reductions_to_zero"] += 1
            continue
        r = _reduce(s, elems, order)
        if not r:
            stats["reductions_to_zero"] += 1
            continue
        add_elem(r)

    polys = [XPoly(order.variables, e.terms()) for e, a in zip(elems, active) if a]
    gb = GroebnerBasis(order, polys, False, stats)
    log.debug("buchberger: %d elements, stats %s", len(polys), stats)
    return reduce_basis(gb) if reduce else gb


def reduce_basis(G: GroebnerBasis) -> GroebnerBasis:
    """The unique reduced Groebner basis of the ideal generated by ``G``.

    ``G`` must already be a Groebner basis for its order.
    """
    order = G.order
    items = [(leading_monomial(g, order), g) for g in G.polys if g.terms]
    items.sort(key=lambda t: order.key(t[0]))
    minimal: list = []
    for lm, g in items:
        if any(_divides(m, lm) for m, _ in minimal):
            continue
        minimal.append((lm, g))
    elems = [_Elem(_monic(dict(g.terms), order), order) for _, g in minimal]
    out = []
    for idx, h in enumerate(elems):
        others = [e for k, e in enumerate(elems) if k != idx]
        tail = _reduce(dict(h.tail), others, order)
        tail[h.lm] = ParamScalar.const(1)
        out.append(tail)
    polys = [XPoly(order.variables, t) for t in out]
    polys.sort(key=lambda f: order.key(leading_monomial(f, order)), reverse=True)
    return GroebnerBasis(order, polys, True, dict(G.stats))


def is_groebner_basis(G: Sequence[XPoly] | GroebnerBasis, order: MonomialOrder | None = None) -> bool:
    """True iff every S-polynomial reduces to zero (coprime pairs skipped)."""
    if isinstance(G, GroebnerBasis):
        order = order or G.order
        G = G.polys
    assert order is not None
    _check_vars(G, order)
    elems = [_Elem(g.terms, order) for g in G if g.terms]
    for a in range(len(elems)):
        for b in range(a + 1, len(elems)):
            if _coprime(elems[a].lm, elems[b].lm):
                continue
            if _reduce(_spoly(elems[a], elems[b]), elems, order):
                return False
    return True


def is_reduced(G: GroebnerBasis) -> bool:
    order = G.order
    lms = [leading_monomial(g, order) for g in G.polys]
    for g, lm in zip(G.polys, lms):
        if not g.terms[lm].is_one():
            return False
        for k, other in enumerate(lms):
            if other == lm:
                continue
            if any(_divides(other, e) for e in g.terms):
                return False
    return len(set(lms)) == len(lms)


def ideal_membership(f: XPoly, G: GroebnerBasis) -> bool:
    return remainder(f, G.polys, G.order).is_zero()


def ideals_equal(B1: Sequence[XPoly], B2: Sequence[XPoly], order: MonomialOrder) -> bool:
    """Equality of ideals by mutual membership against one Groebner basis per side."""
    G1 = buchberger(B1, order)
    G2 = buchberger(B2, order)
    return all(ideal_membership(f, G2) for f in B1 if f.terms) and all(
        ideal_membership(f, G1) for f in B2 if f.terms
    )


def elimination(G: GroebnerBasis, keep: Sequence[str]) -> list[XPoly]:
    """Elements of ``G`` supported on ``keep`` (a Groebner basis of the elimination ideal)."""
    order = G.order
    keep = set(keep)
    unknown = keep - set(order.variables)
    if unknown:
        raise VariableMismatch(f"unknown variables {sorted(unknown)}")
    elim = [v for v in order.variables if v not in keep]
    if elim and not order.is_elimination_for(elim):
        raise NotEliminationOrder(f"order does not eliminate {elim}")
    drop = [i for i, v in enumerate(order.variables) if v not in keep]
    return [g for g in G.polys if all(not e[i] for e in g.terms for i in drop)]


def is_binomial_reduced(G: GroebnerBasis) -> bool:
    return all(len(g.terms) <= 2 for g in G.polys)
