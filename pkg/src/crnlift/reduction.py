"""Intermediate species: validation, the mu-table, the core network, phi and H.

Variables of the extended ring are ordered ``y_1 > ... > y_m > x_1 > ... > x_n``
with intermediates in the order given and non-intermediates in species order.
"""

from __future__ import annotations

import itertools
import logging
import os
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from gmpy2 import mpq

from .algebra import ParamMatrix, ParamScalar, SingularSystem, XPoly, determinant, solve_linear
from .network import Complex, NetworkError, Reaction, ReactionNetwork, steady_state_polynomials

log = logging.getLogger(__name__)


class IntermediateError(ValueError):
    def __init__(self, message: str, species: str | None = None):
        self.species = species
        super().__init__(message)


class NotAComplex(IntermediateError):
    pass


class NonzeroCoefficientElsewhere(IntermediateError):
    pass


class NoInflow(IntermediateError):
    pass


class NoOutflow(IntermediateError):
    pass


class SingularIntermediateSystem(IntermediateError):
    pass


class IndependenceNotVerified(RuntimeError):
    """Phi is only a ring map once the phi values are known to be algebraically independent."""


class TreeCapExceeded(ValueError):
    pass


def tree_cap() -> int:
    return int(os.environ.get("CRN_TREE_CAP", "8"))


@dataclass(frozen=True)
class IntermediateSet:
    members: tuple[str, ...]

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, name) -> bool:
        return name in self.members

    def index(self, name: str) -> int:
        return self.members.index(name)


@dataclass
class MuTable:
    """Nonzero ``mu[i, c]``: coefficient of ``x^c`` in the steady-state value of ``y_i``."""

    entries: dict[tuple[int, Complex], ParamScalar] = field(default_factory=dict)

    def get(self, i: int, c: Complex) -> ParamScalar:
        return self.entries.get((i, c), ParamScalar.const(0))

    def row(self, i: int) -> dict[Complex, ParamScalar]:
        return {c: v for (j, c), v in self.entries.items() if j == i}

    def support(self, i: int) -> set[Complex]:
        return {c for (j, c) in self.entries if j == i}


@dataclass(frozen=True)
class CoreReaction:
    reaction: Reaction            # reaction of the core network (rate k<i>)
    direct_rate: str | None       # rate of c -> c' in the extended network, if present
    via_intermediates: bool       # some path c -> Y ... -> c' exists

    @property
    def is_new(self) -> bool:
        """True for reactions of R': absent from the extended network."""
        return self.direct_rate is None


@dataclass
class IntermediateReduction:
    extended: ReactionNetwork
    intermediates: IntermediateSet
    core: ReactionNetwork
    correspondence: list[CoreReaction]
    y_vars: tuple[str, ...]
    x_vars: tuple[str, ...]
    mu: MuTable = field(default_factory=MuTable)
    phi: dict[str, ParamScalar] = field(default_factory=dict)
    h_polys: list[XPoly] = field(default_factory=list)
    independence_verified: bool = False
    independence_forced: bool = False
    warnings: list[str] = field(default_factory=list)

    @property
    def ring_variables(self) -> tuple[str, ...]:
        return self.y_vars + self.x_vars

    @property
    def r_prime(self) -> list[Reaction]:
        return [cr.reaction for cr in self.correspondence if cr.is_new]

    def core_reaction(self, rate: str) -> CoreReaction:
        for cr in self.correspondence:
            if cr.reaction.rate == rate:
                return cr
        raise KeyError(rate)

    def mark_independent(self, forced: bool = False) -> None:
        self.independence_verified = True
        self.independence_forced = forced


# validation ----------------------------------------------------------------

def _y_matrix(N: ReactionNetwork, Y: Sequence[str]) -> ParamMatrix:
    """Coefficient matrix of y in the intermediate steady-state polynomials."""
    m = len(Y)
    pos = {y: i for i, y in enumerate(Y)}
    A = [[ParamScalar.const(0)] * m for _ in range(m)]
    for r in N.reactions:
        for y, j in pos.items():
            if r.reactant.is_species(y):
                k = ParamScalar.symbol(r.rate)
                A[j][j] = A[j][j] - k
                for y2, i in pos.items():
                    if r.product.is_species(y2):
                        A[i][j] = A[i][j] + k
    return ParamMatrix(A)


def intermediate_components(N: ReactionNetwork, Y: Sequence[str]) -> list[list[str]]:
    """Connected components of the subgraph induced by the intermediates
    (edges taken undirected), each listed in the order of ``Y``."""
    pos = {y: i for i, y in enumerate(Y)}
    parent = list(range(len(Y)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for r in N.reactions:
        a = next((pos[y] for y in Y if r.reactant.is_species(y)), None)
        b = next((pos[y] for y in Y if r.product.is_species(y)), None)
        if a is not None and b is not None:
            parent[find(a)] = find(b)
    groups: dict[int, list[str]] = {}
    for y in Y:
        groups.setdefault(find(pos[y]), []).append(y)
    return sorted(groups.values(), key=lambda g: pos[g[0]])


def _full_rank(rows) -> bool:
    m = [[mpq(v) for v in r] for r in rows]
    n = len(m)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return False
        m[c], m[piv] = m[piv], m[c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return True


def _block_nonsingular(N: ReactionNetwork, block: Sequence[str]) -> bool:
    A = _y_matrix(N, block)
    # a nonzero value at one rational point certifies det != 0 over Q(kappa)
    rng = random.Random(len(block))
    point = {r.rate: rng.randint(2, 97) for r in N.reactions}
    if _full_rank([[x.evaluate(point) for x in row] for row in A.rows]):
        return True
    return not determinant(A).is_zero()


def _nonsingular(N: ReactionNetwork, Y: Sequence[str]) -> bool:
    return all(_block_nonsingular(N, b) for b in intermediate_components(N, Y))


def check_intermediate(N: ReactionNetwork, name: str) -> None:
    """Raise the matching error if ``name`` violates the intermediate definition."""
    if name not in N.species_names:
        raise IntermediateError(f"{name} is not a species of the network", name)
    single = Complex.single(name)
    complexes = N.complexes
    if single not in complexes:
        raise NotAComplex(f"{name} is not itself a complex", name)
    for c in complexes:
        if c != single and c.get(name):
            raise NonzeroCoefficientElsewhere(f"{name} occurs in the complex {c}", name)
    if not any(r.product == single for r in N.reactions):
        raise NoInflow(f"no reaction produces {name}", name)
    if not any(r.reactant == single for r in N.reactions):
        raise NoOutflow(f"no reaction consumes {name}", name)


def validate_intermediates(N: ReactionNetwork, Y: Iterable[str]) -> IntermediateSet:
    Y = tuple(Y)
    if len(set(Y)) != len(Y):
        raise IntermediateError("repeated intermediate")
    for y in Y:
        check_intermediate(N, y)
    if Y and not _nonsingular(N, Y):
        raise SingularIntermediateSystem("the linear system in the intermediate concentrations is singular")
    return IntermediateSet(Y)


def detect_intermediates(N: ReactionNetwork) -> IntermediateSet:
    """Largest candidate set passing validation; on a singular system the
    candidate with the smallest species index is dropped and the check repeated."""
    cands = []
    for s in N.species_names:
        try:
            check_intermediate(N, s)
        except IntermediateError:
            continue
        cands.append(s)
    while cands:
        if _nonsingular(N, cands):
            break
        cands.pop(0)
    return IntermediateSet(tuple(cands))


# graph helpers -------------------------------------------------------------

def _successors(N: ReactionNetwork) -> dict[Complex, list[Reaction]]:
    out: dict[Complex, list[Reaction]] = {}
    for r in N.reactions:
        out.setdefault(r.reactant, []).append(r)
    return out


def _predecessors(N: ReactionNetwork) -> dict[Complex, list[Reaction]]:
    out: dict[Complex, list[Reaction]] = {}
    for r in N.reactions:
        out.setdefault(r.product, []).append(r)
    return out


def input_complexes(N: ReactionNetwork, Y: IntermediateSet, name: str) -> list[Complex]:
    """Non-intermediate complexes with a path to ``name`` through intermediates only."""
    ys = {Complex.single(y) for y in Y}
    preds = _predecessors(N)
    start = Complex.single(name)
    seen = {start}
    found = set()
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for r in preds.get(v, []):
            c = r.reactant
            if c in ys:
                if c not in seen:
                    seen.add(c)
                    queue.append(c)
            else:
                found.add(c)
    return [c for c in N.complexes if c in found]


def inputs_of(R: IntermediateReduction, name: str) -> tuple[list[Complex], int]:
    """Inputs of intermediate ``name`` and their number (the l in l-input)."""
    cs = input_complexes(R.extended, R.intermediates, name)
    return cs, len(cs)


# core network --------------------------------------------------------------

def core_network(N: ReactionNetwork, Y: IntermediateSet, rate_prefix: str = "k") -> IntermediateReduction:
    """Core network and reaction correspondence; mu, phi and H are left empty."""
    ys = {Complex.single(y) for y in Y}
    succ = _successors(N)
    order = {c: i for i, c in enumerate(N.complexes)}
    found: dict[tuple[Complex, Complex], dict] = {}
    for c in N.complexes:
        if c in ys:
            continue
        seen = set()
        queue = deque()
        for r in succ.get(c, []):
            d = r.product
            if d in ys:
                if d not in seen:
                    seen.add(d)
                    queue.append(d)
            elif d != c:
                found.setdefault((c, d), {"direct": None, "via": False})["direct"] = r.rate
        while queue:
            v = queue.popleft()
            for r in succ.get(v, []):
                d = r.product
                if d in ys:
                    if d not in seen:
                        seen.add(d)
                        queue.append(d)
                elif d != c:
                    found.setdefault((c, d), {"direct": None, "via": False})["via"] = True
    if Y:
        keys = sorted(found, key=lambda cd: (order[cd[0]], order[cd[1]]))
    else:
        keys = [(r.reactant, r.product) for r in N.reactions]
    fresh = [f"{rate_prefix}{i}" for i in range(1, len(keys) + 1)]
    if Y:
        clash = set(fresh) & set(N.rate_symbols)
        if clash:
            raise NetworkError(f"core rate symbols {sorted(clash)} already name reactions of the extended network; "
                               f"relabel the extended network (for example with kappa<i>)")
    corr = []
    reactions = []
    for (c, d), name in zip(keys, fresh):
        rx = Reaction(c, d, name) if Y else Reaction(c, d, found[(c, d)]["direct"])
        reactions.append(rx)
        corr.append(CoreReaction(rx, found[(c, d)]["direct"], found[(c, d)]["via"]))
    core_species = [s for s in N.species_names if s not in Y]
    core = ReactionNetwork.build(core_species, reactions)
    ext_vars = dict(zip(N.species_names, N.variables))
    x_vars = tuple(ext_vars[s] for s in core_species)
    if x_vars != core.variables:
        raise NetworkError("species names collide after lower-casing; rename species")
    y_vars = tuple(ext_vars[y] for y in Y)
    return IntermediateReduction(N, Y, core, corr, y_vars, x_vars)


# mu ------------------------------------------------------------------------

def _intermediate_rhs(R: IntermediateReduction) -> list[XPoly]:
    """``-b`` where ``F_{Y_i} = (A y)_i + b_i(x)``."""
    N, Y = R.extended, R.intermediates
    names = R.core.species_names
    out = []
    for y in Y:
        single = Complex.single(y)
        terms: dict = {}
        for r in N.reactions:
            if r.product == single and not any(r.reactant.is_species(z) for z in Y):
                e = r.reactant.exponents(names)
                v = terms.get(e, ParamScalar.const(0)) - ParamScalar.symbol(r.rate)
                terms[e] = v
        out.append(XPoly(R.x_vars, {e: v for e, v in terms.items() if not v.is_zero()}))
    return out


def solve_mu(R: IntermediateReduction) -> MuTable:
    """Solve the intermediate subsystem for y and read off mu per input complex.

    The system is block diagonal over the connected components of the
    intermediates, so each block is solved on its own.
    """
    Y = R.intermediates
    if not len(Y):
        return MuTable()
    rhs = _intermediate_rhs(R)
    names = R.core.species_names
    by_mono = {}
    for c in R.extended.complexes:
        if not any(c.is_species(y) for y in Y):
            by_mono[c.exponents(names)] = c
    table = MuTable()
    for block in intermediate_components(R.extended, Y.members):
        idx = [Y.index(y) for y in block]
        try:
            sol = solve_linear(_y_matrix(R.extended, block), [rhs[i] for i in idx])
        except SingularSystem as exc:
            raise SingularIntermediateSystem(str(exc)) from exc
        for i, yi in zip(idx, sol):
            for e, v in yi.terms.items():
                table.entries[(i, by_mono[e])] = v
    table.entries = dict(sorted(table.entries.items(), key=lambda t: t[0][0]))
    return table


def mu_spanning_tree(N: ReactionNetwork, Y: IntermediateSet, i: int, c: Complex, cap: int | None = None) -> ParamScalar:
    """mu[i, c] as a ratio of rooted spanning-tree sums on the graph with
    vertices Y_1..Y_m and a star vertex (the x^c factor is left out)."""
    m = len(Y)
    cap = tree_cap() if cap is None else cap
    if m > cap:
        raise TreeCapExceeded(f"{m} intermediates exceed the tree enumeration cap {cap}")
    star = m
    pos = {Complex.single(y): j for j, y in enumerate(Y)}
    edges: dict[int, dict[int, ParamScalar]] = {v: {} for v in range(m + 1)}

    def add(u, v, k):
        edges[u][v] = edges[u].get(v, ParamScalar.const(0)) + k

    for r in N.reactions:
        k = ParamScalar.symbol(r.rate)
        if r.reactant in pos:
            u = pos[r.reactant]
            add(u, pos.get(r.product, star), k)
        elif r.reactant == c and r.product in pos:
            add(star, pos[r.product], k)
    for u in edges:
        edges[u].pop(u, None)

    def tree_sum(root: int) -> ParamScalar:
        others = [v for v in range(m + 1) if v != root]
        choices = [list(edges[v].items()) for v in others]
        total = ParamScalar.const(0)
        if any(not ch for ch in choices):
            return total
        for pick in itertools.product(*choices):
            nxt = {v: t for v, (t, _) in zip(others, pick)}
            ok = True
            for v in others:
                seen = set()
                while v != root:
                    if v in seen:
                        ok = False
                        break
                    seen.add(v)
                    v = nxt[v]
                if not ok:
                    break
            if ok:
                p = ParamScalar.const(1)
                for _, lab in pick:
                    p = p * lab
                total = total + p
        return total

    den = tree_sum(star)
    if den.is_zero():
        raise SingularIntermediateSystem("no spanning tree rooted at the star vertex")
    return tree_sum(i) / den


# phi and H -----------------------------------------------------------------

def phi_map(R: IntermediateReduction) -> dict[str, ParamScalar]:
    """``phi(c -> c') = kappa(c -> c') + sum_i kappa(Y_i -> c') mu[i, c]``."""
    N = R.extended
    out_rate: dict[tuple[int, Complex], str] = {}
    for r in N.reactions:
        for i, y in enumerate(R.intermediates):
            if r.reactant.is_species(y):
                out_rate[(i, r.product)] = r.rate
    phi = {}
    for cr in R.correspondence:
        c, d = cr.reaction.reactant, cr.reaction.product
        v = ParamScalar.symbol(cr.direct_rate) if cr.direct_rate else ParamScalar.const(0)
        for i in range(len(R.intermediates)):
            rate = out_rate.get((i, d))
            if rate is not None:
                mu = R.mu.get(i, c)
                if not mu.is_zero():
                    v = v + ParamScalar.symbol(rate) * mu
        if v.is_zero():
            raise AssertionError(f"phi of {cr.reaction.rate} vanishes")
        if not v.has_positive_coefficients():
            R.warnings.append(f"phi of {cr.reaction.rate} has no syntactically positive representation")
        phi[cr.reaction.rate] = v
    return phi


def _phi_raw(R: IntermediateReduction, f: XPoly) -> XPoly:
    images = R.phi
    g = f.map_coefficients(lambda c: c.substitute(images))
    return g.with_variables(R.ring_variables)


def apply_phi(R: IntermediateReduction, f: XPoly) -> XPoly:
    """Replace every core rate constant by its phi value; result lives over (y, x)."""
    if not R.independence_verified:
        raise IndependenceNotVerified("phi values have not been shown algebraically independent")
    return _phi_raw(R, f)


def mu_sum(R: IntermediateReduction, i: int) -> XPoly:
    """``sum_c mu[i, c] x^c`` over the ring (y, x)."""
    names = R.core.species_names
    terms = {}
    m = len(R.y_vars)
    for c, v in R.mu.row(i).items():
        terms[(0,) * m + c.exponents(names)] = v
    return XPoly(R.ring_variables, terms)


def h_polynomials(R: IntermediateReduction) -> list[XPoly]:
    """``H_i = y_i - sum_c mu[i, c] x^c``."""
    return [XPoly.var(R.ring_variables, y) - mu_sum(R, i) for i, y in enumerate(R.y_vars)]


def reduce_network(N: ReactionNetwork, Y: Iterable[str], rate_prefix: str = "k") -> IntermediateReduction:
    """Validate, build the core, and fill mu, phi and H.  The independence gate starts closed."""
    Yset = validate_intermediates(N, Y)
    R = core_network(N, Yset, rate_prefix)
    R.mu = solve_mu(R)
    for (i, c), v in R.mu.entries.items():
        if not v.has_positive_coefficients():
            R.warnings.append(f"mu[{Yset.members[i]}, {c}] has no syntactically positive representation")
    R.phi = phi_map(R)
    R.h_polys = h_polynomials(R)
    if not len(Yset):
        # with no intermediates phi is the identity relabelling, trivially independent
        R.mark_independent()
    return R


# structural identities of the reduction, checked symbolically -----------------

@dataclass
class ReductionCheck:
    support_matches_inputs: bool
    substitution_identity: bool
    basis_equality: bool | None
    details: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.support_matches_inputs and self.substitution_identity and self.basis_equality is not False


def extended_polynomials(R: IntermediateReduction) -> dict[str, XPoly]:
    """Steady-state polynomials of the extended network over the ring (y, x), by species."""
    N = R.extended
    return {s: f.with_variables(R.ring_variables) for s, f in zip(N.species_names, steady_state_polynomials(N))}


def verify_reduction(R: IntermediateReduction, check_basis: bool = True) -> ReductionCheck:
    """Check support(mu) = inputs, the substitution identity and the basis equality."""
    from .groebner import block_extend, grevlex, ideals_equal

    details = []
    support_ok = True
    for i, y in enumerate(R.intermediates):
        inputs, _ = inputs_of(R, y)
        if set(inputs) != R.mu.support(i):
            support_ok = False
            details.append(f"support of mu[{y}] differs from its inputs")
    Ft = extended_polynomials(R)
    assignment = {yv: mu_sum(R, i) for i, yv in enumerate(R.y_vars)}
    core_F = dict(zip(R.core.species_names, steady_state_polynomials(R.core)))
    subst_ok = True
    for s in R.core.species_names:
        lhs = Ft[s].substitute(assignment) if assignment else Ft[s]
        rhs = _phi_raw(R, core_F[s])
        if lhs != rhs:
            subst_ok = False
            details.append(f"substitution identity fails for {s}")
    basis_ok = None
    if check_basis:
        order = block_extend(grevlex(R.x_vars), R.y_vars)
        full = list(Ft.values())
        mixed = [Ft[s] for s in R.core.species_names] + R.h_polys
        basis_ok = ideals_equal(full, mixed, order)
        if not basis_ok:
            details.append("ideal generated by non-intermediate polynomials and H differs")
    return ReductionCheck(support_ok, subst_ok, basis_ok, details)
