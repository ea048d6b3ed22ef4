"""Algebraic independence of the phi functions.

The new core reactions are grouped into overlap classes: two reactions
overlap when each arises from a path through intermediates of one common
connected component.  Classes use disjoint rate symbols, so independence
can be decided class by class.  A singleton class is independent outright;
a larger class is checked through the rank of its Jacobian.  An elimination
ideal gives a second, much more expensive, criterion.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import ParamMatrix, ParamPoly, ParamScalar, XPoly, rank
from .algebra.polys import symbol_name, symbol_sort_key
from .groebner import block, buchberger, elimination, grevlex
from .network import Complex, Reaction
from .reduction import IntermediateReduction, intermediate_components


class EliminationCapExceeded(ValueError):
    pass


def elimination_cap() -> int:
    return int(os.environ.get("CRN_ELIM_CAP", "4"))


@dataclass
class OverlapClasses:
    r_prime: list[Reaction]
    classes: list[list[Reaction]]
    intermediate_components: list[list[str]]

    def __len__(self) -> int:
        return len(self.classes)


@dataclass
class IndependenceVerdict:
    independent: bool
    methods: list[str] = field(default_factory=list)   # per class: "singleton" or "jacobian"
    ranks: list[int | None] = field(default_factory=list)
    classes: OverlapClasses | None = None

    def to_json(self) -> dict:
        cl = self.classes.classes if self.classes else []
        return {
            "independent": self.independent,
            "classes": [
                {"reactions": [r.render() for r in c], "method": m, "rank": k, "size": len(c)}
                for c, m, k in zip(cl, self.methods, self.ranks)
            ],
        }


def _path_components(R: IntermediateReduction, comps: list[list[str]]) -> dict[str, set[int]]:
    """For each new core reaction, the components carrying one of its paths."""
    N = R.extended
    Y = set(R.intermediates)
    comp_of = {y: j for j, c in enumerate(comps) for y in c}
    succ: dict[str, list[str]] = {y: [] for y in Y}
    enters: dict[Complex, set[str]] = {}
    leaves: dict[str, set[Complex]] = {y: set() for y in Y}
    for r in N.reactions:
        src = next((y for y in Y if r.reactant.is_species(y)), None)
        dst = next((y for y in Y if r.product.is_species(y)), None)
        if src and dst:
            succ[src].append(dst)
        elif dst:
            enters.setdefault(r.reactant, set()).add(dst)
        elif src:
            leaves[src].add(r.product)
    out: dict[str, set[int]] = {}
    for r in R.r_prime:
        found = set()
        for start in enters.get(r.reactant, ()):
            seen, stack = {start}, [start]
            while stack:
                y = stack.pop()
                if r.product in leaves[y]:
                    found.add(comp_of[y])
                    break
                for z in succ[y]:
                    if z not in seen:
                        seen.add(z)
                        stack.append(z)
        out[r.rate] = found
    return out


def overlap_classes(R: IntermediateReduction) -> OverlapClasses:
    comps = intermediate_components(R.extended, R.intermediates.members)
    rp = R.r_prime
    via = _path_components(R, comps)
    parent = list(range(len(rp)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    owner: dict[int, int] = {}
    for i, r in enumerate(rp):
        for c in via[r.rate]:
            if c in owner:
                parent[find(i)] = find(owner[c])
            else:
                owner[c] = i
    groups: dict[int, list[Reaction]] = {}
    for i, r in enumerate(rp):
        groups.setdefault(find(i), []).append(r)
    # classes listed by their first reaction in core order
    classes = sorted(groups.values(), key=lambda g: rp.index(g[0]))
    return OverlapClasses(rp, classes, comps)


def jacobian(phis: Sequence[ParamScalar], symbols: Sequence[str] | None = None) -> ParamMatrix:
    if symbols is None:
        symbols = sorted(set().union(*(p.symbols() for p in phis)), key=symbol_sort_key)
    return ParamMatrix([[p.diff(s) for s in symbols] for p in phis])


def jacobian_rank(phis: Sequence[ParamScalar]) -> int:
    if not phis:
        return 0
    return rank(jacobian(phis))


def check_independence(R: IntermediateReduction, mark: bool = True) -> IndependenceVerdict:
    """Decide independence class by class and open the gate on success."""
    oc = overlap_classes(R)
    symsets = [set().union(*(R.phi[r.rate].symbols() for r in c)) for c in oc.classes]
    for a in range(len(symsets)):
        for b in range(a + 1, len(symsets)):
            if symsets[a] & symsets[b]:
                raise AssertionError("overlap classes share rate symbols")
    methods, ranks = [], []
    ok = True
    for c in oc.classes:
        if len(c) == 1:
            methods.append("singleton")
            ranks.append(None)
            continue
        k = jacobian_rank([R.phi[r.rate] for r in c])
        methods.append("jacobian")
        ranks.append(k)
        ok = ok and k == len(c)
    verdict = IndependenceVerdict(ok, methods, ranks, oc)
    if ok and mark:
        R.mark_independent()
    return verdict


def _as_xpoly(p: ParamPoly, variables: tuple[str, ...]) -> XPoly:
    pos = {v: i for i, v in enumerate(variables)}
    terms = {}
    for mono, c in p.terms.items():
        e = [0] * len(variables)
        for i, k in enumerate(mono):
            if k:
                e[pos[symbol_name(i)]] = k
        terms[tuple(e)] = ParamScalar.const(c)
    return XPoly(variables, terms)


def independence_elimination_check(phis: Sequence[ParamScalar], cap: int | None = None) -> bool:
    """True iff ``<g_i T_i - f_i, 1 - s g_1...g_m>`` meets Q[T] only in zero.

    The rate symbols become ring variables over Q.  A block order with the
    rates and ``s`` first eliminates them.
    """
    cap = elimination_cap() if cap is None else cap
    if len(phis) > cap:
        raise EliminationCapExceeded(f"{len(phis)} functions exceed the elimination cap {cap}")
    if not phis:
        return True
    kappas = sorted(set().union(*(p.symbols() for p in phis)), key=symbol_sort_key)
    taken = set(kappas)
    aux = "s"
    while aux in taken:
        aux = "_" + aux
    ts = []
    for i in range(len(phis)):
        t = f"T{i + 1}"
        while t in taken:
            t = "_" + t
        ts.append(t)
    first = tuple(kappas) + (aux,)
    variables = first + tuple(ts)
    gens = []
    prod = XPoly.constant(variables, ParamScalar.const(1))
    for t, p in zip(ts, phis):
        f = _as_xpoly(p.num, tuple(kappas)).with_variables(variables)
        g = _as_xpoly(p.den, tuple(kappas)).with_variables(variables)
        gens.append(g * XPoly.var(variables, t) - f)
        prod = prod * g
    gens.append(XPoly.constant(variables, ParamScalar.const(1)) - XPoly.var(variables, aux) * prod)
    order = block(grevlex(first), grevlex(ts))
    G = buchberger(gens, order)
    return not elimination(G, ts)
