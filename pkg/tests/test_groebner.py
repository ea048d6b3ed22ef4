import itertools

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from crnlift.algebra import ParamScalar, XPoly, parse_xpoly
from crnlift.groebner import (
    InvalidOrderMatrix,
    NotEliminationOrder,
    block,
    block_extend,
    buchberger,
    divide,
    elimination,
    grevlex,
    ideal_membership,
    ideals_equal,
    is_groebner_basis,
    is_reduced,
    leading_monomial,
    lex,
    make_order,
    remainder,
    s_polynomial,
)
from strategies import SYMS, to_sympy, xpolys

V2 = ("x1", "x2")


def P(s, v=V2):
    return parse_xpoly(s, v)


# orders ------------------------------------------------------------------------

exps3 = st.tuples(*[st.integers(0, 3)] * 3)


@pytest.mark.parametrize("make", [lex, grevlex])
@given(a=exps3, b=exps3, c=exps3)
def test_orders_are_total_and_multiplicative(make, a, b, c):
    o = make(("x", "y", "z"))
    assert o.compare(a, b) == -o.compare(b, a)
    assert (o.compare(a, b) == 0) == (a == b)
    add = lambda u, v: tuple(p + q for p, q in zip(u, v))
    assert o.compare(add(a, c), add(b, c)) == o.compare(a, b)
    assert o.compare(a, (0, 0, 0)) >= 0


def test_grevlex_breaks_ties_on_the_last_variable():
    o = grevlex(("x", "y", "z"))
    assert o.greater((1, 0, 1), (0, 2, 0)) is False  # xz < y^2
    assert o.greater((2, 0, 0), (1, 1, 0))
    assert lex(("x", "y", "z")).greater((1, 0, 1), (0, 2, 0))


def test_custom_matrix_validation():
    assert make_order("custom", ("a", "b"), [[1, 1], [1, 0]]).greater((1, 0), (0, 1))
    with pytest.raises(InvalidOrderMatrix):
        make_order("custom", ("a", "b"), [[1, 1], [2, 2]])
    with pytest.raises(InvalidOrderMatrix):
        make_order("custom", ("a", "b"), [[-1, 0], [0, 1]])
    with pytest.raises(InvalidOrderMatrix):
        make_order("custom", ("a", "b"), [[1, 0, 0]])
    with pytest.raises(InvalidOrderMatrix):
        make_order("wavy", ("a",))


def test_block_orders_are_elimination_orders():
    o = block_extend(grevlex(("x1", "x2")), ("y1", "y2"))
    assert o.variables == ("y1", "y2", "x1", "x2")
    assert o.is_elimination_for(["y1", "y2"])
    assert not grevlex(o.variables).is_elimination_for(["y1"])
    b = block(grevlex(("s", "t")), lex(("u",)))
    assert b.greater((0, 1, 0), (0, 0, 5))


# division and S-polynomials ------------------------------------------------------

@settings(max_examples=40)
@given(xpolys(variables=V2, rational=True), st.lists(xpolys(variables=V2), min_size=1, max_size=3))
def test_division_reconstructs_the_dividend(f, G):
    G = [g for g in G if not g.is_zero()]
    if not G:
        return
    o = grevlex(V2)
    q, r = divide(f, G, o)
    total = r
    for qi, gi in zip(q, G):
        total = total + qi * gi
    assert total == f
    lms = [leading_monomial(g, o) for g in G]
    for e in r.terms:
        assert not any(all(a >= b for a, b in zip(e, m)) for m in lms)


def test_s_polynomial_cancels_leading_terms():
    o = lex(V2)
    f, g = P("x1^2*x2 - k1*x2"), P("k2*x1*x2^2 + x1")
    s = s_polynomial(f, g, o)
    assert s == P("-k1*x2^2 - (1/k2)*x1^2")


# Buchberger --------------------------------------------------------------------

def _sympy_reduced(G, order_name, gens):
    dom = sympy.QQ.frac_field(*[sympy.Symbol(k) for k in SYMS])
    xs = [sympy.Symbol(v) for v in gens]
    return sympy.groebner([to_sympy(g) for g in G], *xs, order=order_name, domain=dom)


CASES = [
    ["x1^2 - k1*x2", "x1*x2 - k2"],
    ["k1*x1^2*x2 - x2^2", "k2*x1*x2 - k3*x1", "x2^3 - x1"],
    ["x1^3 - k1*x1", "x1^2*x2 - k2*x2^2"],
    ["(k1 + k2)*x1 - k3*x2^2", "x1*x2 - 1"],
]


@pytest.mark.parametrize("gens", CASES)
@pytest.mark.parametrize("kind", ["lex", "grevlex"])
def test_reduced_basis_matches_sympy(gens, kind):
    o = make_order(kind, V2)
    G = buchberger([P(g) for g in gens], o)
    assert is_groebner_basis(G) and is_reduced(G)
    ref = _sympy_reduced([P(g) for g in gens], kind, V2)
    assert len(G) == len(ref.exprs)
    for g in G:
        assert any(sympy.simplify(to_sympy(g.to_str()) - h) == 0 for h in ref.exprs), g


@settings(max_examples=25)
@given(st.lists(xpolys(variables=V2, max_terms=3, max_exp=2), min_size=1, max_size=3))
def test_reduced_basis_ignores_generator_order(gens):
    o = grevlex(V2)
    G = buchberger(gens, o)
    assert is_groebner_basis(G)
    assert is_reduced(G)
    for perm in itertools.islice(itertools.permutations(gens), 1, 4):
        assert buchberger(list(perm), o).polys == G.polys
    assert buchberger(G.polys, o).polys == G.polys
    for g in gens:
        assert ideal_membership(g, G)


def test_unit_ideal_and_empty_input():
    o = grevlex(V2)
    G = buchberger([P("x1 - 1"), P("x1")], o)
    assert [g.to_str() for g in G] == ["1"]
    assert len(buchberger([], o)) == 0
    assert len(buchberger([XPoly.zero(V2)], o)) == 0


def test_ideals_equal_detects_difference():
    o = grevlex(V2)
    assert ideals_equal([P("x1^2"), P("x2")], [P("x2"), P("x1^2 + k1*x2")], o)
    assert not ideals_equal([P("x1")], [P("x1^2")], o)


def test_elimination_keeps_the_tail_variables():
    v = ("y", "x1", "x2")
    o = block_extend(grevlex(V2), ("y",))
    G = buchberger([P("y - k1*x1", v), P("y - x2^2", v)], o)
    kept = elimination(G, V2)
    assert [g.to_str() for g in kept] == ["x2^2 - k1*x1"]
    with pytest.raises(NotEliminationOrder):
        elimination(buchberger([P("y - x1", v)], grevlex(v)), V2)


@settings(max_examples=20)
@given(
    st.lists(xpolys(variables=V2, max_terms=2, max_exp=2), min_size=1, max_size=3),
    xpolys(variables=V2, max_terms=3, max_exp=2),
    st.booleans(),
)
def test_new_variable_block_preserves_the_groebner_property(gens, tail, complete):
    """``{y - p} | G`` is a Groebner basis under ``[Id, 0; 0, Q]`` exactly when ``G`` is one under ``Q``."""
    o = grevlex(V2)
    G = buchberger(gens, o).polys if complete else [g for g in gens if not g.is_zero()]
    v = ("y",) + V2
    ext = block_extend(o, ("y",))
    lifted = [XPoly.var(v, "y") - tail.with_variables(v)] + [g.with_variables(v) for g in G]
    assert is_groebner_basis(lifted, ext) == is_groebner_basis(G, o)


def test_remainder_by_basis_is_canonical():
    o = lex(V2)
    G = buchberger([P("x1^2 - x2"), P("x1*x2 - k1")], o)
    f = P("x1^3 + x2")
    g = f + P("x1*x2 - k1") * P("k2*x1 + x2^2")
    assert remainder(f, G.polys, o) == remainder(g, G.polys, o)
    assert remainder(f, G.polys, o).coefficient((1, 0)) == ParamScalar.const(0)
