"""Groebner bases, invariants and binomiality of the extended network from
the core network.

With ``G`` the reduced basis of the core ideal under an order ``Q`` and
``Phi`` the coefficient substitution, the reduced basis of the extended
ideal under the block order with the intermediate variables first is

    Phi(G)  together with  y_i - Rem(sum_c mu[i, c] x^c, Phi(G)).

Every pipeline here refuses to run until the independence gate on the
reduction is open, since ``Phi`` is only a ring map under that condition.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import gmpy2
from gmpy2 import mpq

from .algebra import ParamPoly, ParamScalar, XPoly, param_gcd, param_lcm
from .groebner import (
    GroebnerBasis,
    MonomialOrder,
    block_extend,
    buchberger,
    elimination,
    grevlex,
    is_binomial_reduced,
    is_groebner_basis,
    is_reduced,
    leading_monomial,
    lex,
    remainder,
)
from .network import steady_state_ideal
from .reduction import (
    IndependenceNotVerified,
    IntermediateReduction,
    extended_polynomials,
    inputs_of,
    mu_sum,
)


class KeepContainsIntermediate(ValueError):
    pass


def _require_gate(R: IntermediateReduction) -> None:
    if not R.independence_verified:
        raise IndependenceNotVerified(
            "algebraic independence of the phi values is not established; "
            "run the independence check or force it explicitly"
        )


def _ms(t0: float) -> float:
    return round((time.perf_counter() - t0) * 1000.0, 3)


def _phi(R: IntermediateReduction, f: XPoly, variables: Sequence[str]) -> XPoly:
    return f.map_coefficients(lambda c: c.substitute(R.phi)).with_variables(variables)


def _sorted_basis(polys: list[XPoly], order: MonomialOrder) -> list[XPoly]:
    return sorted(polys, key=lambda f: order.key(leading_monomial(f, order)), reverse=True)


def _core_order(R: IntermediateReduction, order: MonomialOrder | None) -> MonomialOrder:
    order = order or grevlex(R.x_vars)
    if sorted(order.variables) != sorted(R.x_vars):
        raise ValueError("core order must be over the non-intermediate variables")
    return order


def core_basis(R: IntermediateReduction, order: MonomialOrder | None = None) -> GroebnerBasis:
    """Reduced basis of the core ideal; ``order`` may list the variables in any order."""
    order = _core_order(R, order)
    return buchberger([f.with_variables(order.variables) for f in steady_state_ideal(R.core)], order)


@dataclass
class LiftReport:
    core_basis: GroebnerBasis
    lifted_basis: GroebnerBasis
    order_used: MonomialOrder
    remainders: list[XPoly]
    timings: dict[str, float] = field(default_factory=dict)
    direct_basis: GroebnerBasis | None = None
    verified: bool | None = None

    @property
    def direct_matches(self) -> bool | None:
        if self.direct_basis is None:
            return None
        return self.direct_basis.polys == self.lifted_basis.polys


def lift_groebner(
    R: IntermediateReduction,
    core_order: MonomialOrder | None = None,
    *,
    compare_direct: bool = False,
    verify: bool = True,
) -> LiftReport:
    """Reduced Groebner basis of the extended ideal built from the core basis."""
    _require_gate(R)
    Q = _core_order(R, core_order)
    order = block_extend(Q, R.y_vars)
    ring = order.variables
    timings = {}

    t0 = time.perf_counter()
    G = core_basis(R, Q)
    timings["core_gb_ms"] = _ms(t0)

    t0 = time.perf_counter()
    phiG = [_phi(R, g, ring) for g in G.polys]
    sums = [mu_sum(R, i).with_variables(ring) for i in range(len(R.y_vars))]
    timings["h_construction_ms"] = _ms(t0)

    t0 = time.perf_counter()
    rems = [remainder(s, phiG, order) for s in sums]
    hs = [XPoly.var(ring, y) - r for y, r in zip(R.y_vars, rems)]
    timings["reduction_ms"] = _ms(t0)

    lifted = GroebnerBasis(order, _sorted_basis(phiG + hs, order), True, {})
    report = LiftReport(G, lifted, order, rems, timings)

    if verify:
        t0 = time.perf_counter()
        report.verified = is_groebner_basis(lifted) and is_reduced(lifted)
        timings["verify_ms"] = _ms(t0)
        if not report.verified:
            raise AssertionError("lifted basis is not a reduced Groebner basis")
    if compare_direct:
        t0 = time.perf_counter()
        gens = [f.with_variables(ring) for f in extended_polynomials(R).values() if not f.is_zero()]
        report.direct_basis = buchberger(gens, order)
        timings["direct_gb_ms"] = _ms(t0)
    return report


# invariants ----------------------------------------------------------------

def primitive_form(f: XPoly, order: MonomialOrder | None = None) -> XPoly:
    """Scale ``f`` by an element of Q(k) so its coefficients are coprime
    polynomials with integer coefficients and a positive leading coefficient."""
    if f.is_zero():
        return f
    coeffs = list(f.terms.values())
    den = reduce(param_lcm, (c.den for c in coeffs))
    nums = {e: c.num * (den / c.den) for e, c in f.terms.items()}
    g = reduce(param_gcd, nums.values())
    nums = {e: n / g for e, n in nums.items()}
    rationals = [c for n in nums.values() for c in n.terms.values()]
    num_gcd = reduce(gmpy2.gcd, (c.numerator for c in rationals))
    den_lcm = reduce(gmpy2.lcm, (c.denominator for c in rationals))
    scale = mpq(den_lcm, num_gcd)
    order = order or grevlex(f.variables)
    lead = nums[leading_monomial(f, order)]
    if lead.canonical_leading()[1] < 0:
        scale = -scale
    return XPoly(f.variables, {e: ParamScalar.from_poly(n.scale(scale)) for e, n in nums.items()})


def _keep_order(R: IntermediateReduction, keep: Sequence[str]) -> tuple[list[str], list[str]]:
    keep = list(keep)
    bad = [v for v in keep if v in R.y_vars]
    if bad:
        raise KeepContainsIntermediate(f"cannot keep intermediate variables {bad}")
    unknown = [v for v in keep if v not in R.x_vars]
    if unknown:
        raise ValueError(f"unknown variables {unknown}")
    kept = [v for v in R.x_vars if v in keep]
    dropped = [v for v in R.x_vars if v not in keep]
    return dropped, kept


def core_invariants(R: IntermediateReduction, keep: Sequence[str]) -> list[XPoly]:
    """Primitive generators of ``I`` intersected with Q(k)[keep], over the keep ring."""
    dropped, kept = _keep_order(R, keep)
    order = lex(dropped + kept)
    gens = [f.with_variables(order.variables) for f in steady_state_ideal(R.core)]
    G = buchberger(gens, order)
    ring_order = lex(kept)
    return [primitive_form(g.with_variables(kept), ring_order) for g in elimination(G, kept)]


def invariants(R: IntermediateReduction, keep: Sequence[str]) -> list[XPoly]:
    """Generators of the extended ideal intersected with Q(kappa)[keep]:
    the phi images of :func:`core_invariants`."""
    _require_gate(R)
    core = core_invariants(R, keep)
    return [_phi(R, g, g.variables) for g in core]


# binomiality ---------------------------------------------------------------

@dataclass
class BinomialityVerdict:
    verdict: str                      # "binomial" or "not_binomial"
    core_binomial: bool
    remainder_terms: dict[str, int | None]
    witness: tuple[str, XPoly] | None
    shortcut_used: str                # "one_input", "full_remainder_check" or "none"
    core_basis: GroebnerBasis | None = None

    @property
    def binomial(self) -> bool:
        return self.verdict == "binomial"


def binomiality(R: IntermediateReduction, order: MonomialOrder | None = None) -> BinomialityVerdict:
    """Decide whether the extended steady-state ideal is binomial.

    One reduced basis decides the question for every order, so a single
    (default grevlex) order is used.
    """
    _require_gate(R)
    Q = _core_order(R, order)
    G = core_basis(R, Q)
    core_binomial = is_binomial_reduced(G)
    names = list(R.intermediates)
    counts: dict[str, int | None] = {y: None for y in names}
    if not core_binomial:
        return BinomialityVerdict("not_binomial", False, counts, None, "none", G)
    if all(inputs_of(R, y)[1] == 1 for y in names):
        return BinomialityVerdict("binomial", True, counts, None, "one_input", G)
    ext = block_extend(Q, R.y_vars)
    phiG = [_phi(R, g, ext.variables) for g in G.polys]
    witness = None
    for i, y in enumerate(names):
        r = remainder(mu_sum(R, i).with_variables(ext.variables), phiG, ext)
        counts[y] = len(r.terms)
        if len(r.terms) > 1 and witness is None:
            witness = (y, r)
    verdict = "binomial" if witness is None else "not_binomial"
    return BinomialityVerdict(verdict, True, counts, witness, "full_remainder_check", G)
