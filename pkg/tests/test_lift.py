import random

import pytest
from hypothesis import given, settings, strategies as st

from crnlift import networks
from crnlift.algebra import parse_xpoly
from crnlift.generate import random_network
from crnlift.groebner import buchberger, grevlex, ideals_equal, lex
from crnlift.independence import check_independence
from crnlift.lift import (
    KeepContainsIntermediate,
    binomiality,
    core_basis,
    core_invariants,
    invariants,
    lift_groebner,
    primitive_form,
)
from crnlift.network import steady_state_ideal
from crnlift.reduction import IndependenceNotVerified, extended_polynomials, reduce_network


def _load(name):
    N = networks.load(name, "kappa")
    R = reduce_network(N, N.intermediates_hint)
    check_independence(R)
    return N, R


# lifting -------------------------------------------------------------------------

def test_triangle_lift_matches_direct(triangle):
    rep = lift_groebner(triangle, compare_direct=True)
    assert rep.verified and rep.direct_matches
    assert len(rep.lifted_basis) == len(rep.core_basis) + 3
    assert rep.lifted_basis.order.variables[:3] == ("y1", "y2", "y3")
    assert set(rep.timings) >= {"core_gb_ms", "h_construction_ms", "reduction_ms", "verify_ms", "direct_gb_ms"}


def test_mapk_lift_under_a_permuted_core_order(mapk):
    order = lex(("x2", "x1", "x0", "f", "e"))
    rep = lift_groebner(mapk, order, compare_direct=True)
    assert rep.direct_matches
    assert rep.order_used.variables == mapk.y_vars + order.variables


def test_lift_without_intermediates_is_the_core_basis():
    N = networks.load("binding_release")
    R = reduce_network(N, [])
    check_independence(R)
    rep = lift_groebner(R)
    assert rep.lifted_basis.polys == rep.core_basis.polys
    assert rep.remainders == []


def test_lift_refuses_without_the_gate():
    N = networks.load("triangle")
    R = reduce_network(N, N.intermediates_hint)
    with pytest.raises(IndependenceNotVerified):
        lift_groebner(R)
    R.mark_independent(forced=True)
    assert lift_groebner(R).verified


def test_core_order_must_cover_the_core_variables(triangle):
    with pytest.raises(ValueError):
        lift_groebner(triangle, grevlex(("x1", "x2")))


@settings(max_examples=20)
@given(st.integers(0, 10**6))
def test_lifted_basis_equals_direct_basis(seed):
    N = random_network(random.Random(seed))
    R = reduce_network(N, N.intermediates_hint)
    if not check_independence(R).independent:
        return
    rep = lift_groebner(R, compare_direct=True)
    assert rep.direct_matches
    raw = [f for f in extended_polynomials(R).values() if not f.is_zero()]
    assert ideals_equal(raw, rep.lifted_basis.polys, rep.order_used)


# invariants ------------------------------------------------------------------------

def test_mapk_invariant(mapk):
    keep = ["e", "x0", "x1", "x2"]
    (core,) = core_invariants(mapk, keep)
    v = core.variables
    assert core == parse_xpoly("k1*k3*x0*e*x2 - k2*k4*e*x1^2", v)
    (image,) = invariants(mapk, keep)
    expected = parse_xpoly(
        "(kappa1*kappa3*kappa7*kappa9/((kappa2 + kappa3)*(kappa8 + kappa9)))*x0*e*x2"
        " - (kappa4*kappa6*kappa12*kappa14/((kappa5 + kappa6)*(kappa13 + kappa14)))*e*x1^2",
        v,
    )
    assert image == expected


def test_keep_set_must_avoid_intermediates(mapk):
    with pytest.raises(KeepContainsIntermediate):
        invariants(mapk, ["y1", "x0"])


def test_primitive_form_clears_denominators():
    v = ("x1", "x2")
    f = parse_xpoly("(1/(2*k1))*x1^2 - (k2/(4*k1))*x2", v)
    assert primitive_form(f, lex(v)) == parse_xpoly("2*x1^2 - k2*x2", v)
    assert primitive_form(-f, lex(v)) == primitive_form(f, lex(v))


# binomiality -------------------------------------------------------------------------

def test_triangle_is_binomial(triangle):
    v = binomiality(triangle)
    assert v.binomial and v.shortcut_used == "full_remainder_check"
    assert v.remainder_terms == {"Y1": 1, "Y2": 1, "Y3": 1}
    G = core_basis(triangle, lex(("x1", "x2", "x3")))
    assert G.polys == [parse_xpoly("x1^2 + ((k1 - k2)/(2*k3))*x1*x2", ("x1", "x2", "x3"))]


def test_mapk_is_not_binomial(mapk):
    v = binomiality(mapk)
    assert v.core_binomial and not v.binomial
    y, rem = v.witness
    assert y == "Y4"
    ring = rem.variables
    assert rem == parse_xpoly("(kappa11/kappa10)*x1*f + (kappa7*kappa9/(kappa8*kappa10 + kappa9*kappa10))*x2*f", ring)


def test_mapk_verdict_does_not_depend_on_the_order(mapk):
    v = binomiality(mapk, lex(("x2", "x1", "x0", "f", "e")))
    assert not v.binomial
    assert v.remainder_terms == {"Y1": 1, "Y2": 1, "Y3": 1, "Y4": 2, "Y5": 1, "Y6": 2}


def test_conradi_core_is_not_binomial(conradi):
    v = binomiality(conradi)
    assert not v.core_binomial and v.shortcut_used == "none"


@pytest.mark.parametrize("name", ["isomer_chain", "mapk_core", "triangle_core"])
def test_one_input_shortcut_agrees_with_the_full_check(name):
    _, R = _load(name)
    v = binomiality(R)
    assert v.shortcut_used == "one_input"
    # the full check: every remainder of a one-term sum keeps at most one term
    assert all(len(r.terms) <= 1 for r in lift_groebner(R).remainders)


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_shortcut_and_full_check_agree_on_random_networks(seed):
    N = random_network(random.Random(seed), max_intermediates=2)
    R = reduce_network(N, N.intermediates_hint)
    if not check_independence(R).independent:
        return
    v = binomiality(R)
    if v.shortcut_used != "one_input":
        return
    assert all(len(r.terms) <= 1 for r in lift_groebner(R).remainders)


def test_autocatalysis_with_an_enzyme():
    N, R = _load("autocatalysis")
    assert binomiality(R).binomial
    N, R = _load("autocatalysis_enzyme")
    G = buchberger(steady_state_ideal(N), grevlex(N.variables))
    assert G.polys == [parse_xpoly("x^3 - (kappa1/(2*kappa2))*x^2 + (kappa3/(2*kappa2))*x^2*e", N.variables)]
    assert binomiality(R).verdict == "not_binomial"


def test_degradation_with_an_enzyme():
    N, _ = _load("degradation")
    assert buchberger(steady_state_ideal(N), lex(N.variables)).strings() == ["x1"]
    M, _ = _load("degradation_enzyme")
    x1 = parse_xpoly("x1", M.variables)
    assert not ideals_equal(steady_state_ideal(M), [x1], grevlex(M.variables))
