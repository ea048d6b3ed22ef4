import random

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, strategies as st

from crnlift.algebra import (
    ExpressionError,
    ParamMatrix,
    ParamPoly,
    ParamScalar,
    SingularSystem,
    VariableMismatch,
    XPoly,
    determinant,
    param_gcd,
    param_lcm,
    parse_scalar,
    parse_xpoly,
    rank,
    solve_linear,
)
from strategies import XVARS, nonzero_param_polys, param_polys, scalars, sympy_equal, to_sympy, xpolys

S = ParamScalar.symbol
k1, k2, k3 = S("k1"), S("k2"), S("k3")


# parameter polynomials ----------------------------------------------------

@given(param_polys(), param_polys(), param_polys())
def test_param_poly_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ParamPoly()


@given(param_polys(), nonzero_param_polys())
def test_exact_division_undoes_multiplication(a, b):
    assert (a * b) / b == a


@given(nonzero_param_polys(), nonzero_param_polys(), nonzero_param_polys(max_terms=2))
def test_gcd_divides_and_matches_sympy(a, b, c):
    g = param_gcd(a * c, b * c)
    assert (a * c).exact_div(g) is not None
    assert (b * c).exact_div(g) is not None
    expected = sympy.gcd(to_sympy(a * c), to_sympy(b * c))
    assert sympy.simplify(to_sympy(g) / expected).is_number


@given(nonzero_param_polys(), nonzero_param_polys())
def test_lcm_is_common_multiple(a, b):
    m = param_lcm(a, b)
    assert m.exact_div(a) is not None and m.exact_div(b) is not None


def test_inexact_division_raises():
    with pytest.raises(ArithmeticError):
        ParamPoly.symbol("k1") / ParamPoly.symbol("k2")


# the fraction field --------------------------------------------------------

@given(scalars(), scalars())
def test_scalar_field_operations_agree_with_sympy(a, b):
    assert sympy_equal(a + b, to_sympy(a) + to_sympy(b))
    assert sympy_equal(a * b, to_sympy(a) * to_sympy(b))
    if not b.is_zero():
        assert sympy_equal(a / b, to_sympy(a) / to_sympy(b))


@given(scalars())
def test_scalars_stay_reduced(a):
    assert a.is_reduced()
    if not a.is_zero():
        assert (a * a.inverse()).is_one()


def test_reduced_form_cancels_common_factor():
    x = (k1 * k2 + k1 * k3) / (k1 * k2)
    assert str(x) == "(k2 + k3)/k2"
    assert (k1 / k1).is_one()


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        k1 / ParamScalar.const(0)


@given(scalars())
def test_derivative_matches_sympy(a):
    d = a.diff("k1")
    assert sympy_equal(d, sympy.diff(to_sympy(a), sympy.Symbol("k1")))


def test_positive_representation_check():
    assert (k1 / (k2 + k3)).has_positive_coefficients()
    assert not (k1 - k2).has_positive_coefficients()


def test_evaluate_and_substitute():
    x = k1 / (k2 + k3)
    assert x.evaluate({"k1": 6, "k2": 1, "k3": 2}) == mpq(2)
    y = x.substitute({"k1": k2 * k3})
    assert y == k2 * k3 / (k2 + k3)


# polynomials in the concentration variables ---------------------------------

@given(xpolys(), xpolys(), xpolys())
def test_xpoly_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * (g + h) == f * g + f * h
    assert (f * g) * h == f * (g * h)


@given(xpolys(rational=True))
def test_canonical_string_round_trip(f):
    assert parse_xpoly(f.to_str(), XVARS) == f


@given(scalars())
def test_scalar_string_round_trip(a):
    assert parse_scalar(str(a)) == a


def test_parse_errors():
    with pytest.raises(ExpressionError):
        parse_xpoly("x1 +", XVARS)
    with pytest.raises(ExpressionError):
        parse_xpoly("x1 / x2", XVARS)
    with pytest.raises(ExpressionError):
        parse_xpoly("x1 $ 2", XVARS)


def test_variable_mismatch():
    f = XPoly.var(("x1", "x2"), "x1")
    g = XPoly.var(("x2", "x1"), "x1")
    with pytest.raises(VariableMismatch):
        f + g
    assert f == g.with_variables(("x1", "x2"))


def test_xpoly_substitution_and_derivative():
    v = ("y", "x")
    f = parse_xpoly("k1*y*x - k2*x^2", v)
    g = f.substitute({"y": parse_xpoly("k3*x", v)})
    assert g == parse_xpoly("(k1*k3 - k2)*x^2", v)
    assert f.diff("x") == parse_xpoly("k1*y - 2*k2*x", v)


# symbolic linear algebra -----------------------------------------------------

def _random_matrix(rng: random.Random, n: int) -> list[list[ParamScalar]]:
    syms = [S(f"k{i}") for i in range(1, 5)]
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            r = rng.random()
            if r < 0.3:
                row.append(ParamScalar.const(0))
            elif r < 0.7:
                row.append(rng.choice(syms) * rng.randint(1, 3))
            else:
                row.append(rng.choice(syms) + ParamScalar.const(rng.randint(-2, 2)))
        rows.append(row)
    return rows


def _sym_matrix(rows):
    return sympy.Matrix([[to_sympy(x) for x in r] for r in rows])


@pytest.mark.parametrize("seed", range(12))
def test_determinant_and_rank_against_sympy(seed):
    rng = random.Random(seed)
    rows = _random_matrix(rng, rng.randint(1, 4))
    M = _sym_matrix(rows)
    d = determinant(ParamMatrix(rows))
    assert sympy.simplify(to_sympy(d) - M.det()) == 0
    assert rank(ParamMatrix(rows)) == M.rank(simplify=True)


@pytest.mark.parametrize("seed", range(12))
def test_solve_linear_satisfies_system(seed):
    rng = random.Random(100 + seed)
    rows = _random_matrix(rng, rng.randint(1, 3))
    A = ParamMatrix(rows)
    v = ("x1", "x2")
    b = [parse_xpoly(f"{rng.randint(1, 3)}*k1*x1 + x2", v) for _ in rows]
    if determinant(A).is_zero():
        with pytest.raises(SingularSystem):
            solve_linear(A, b)
        return
    y = solve_linear(A, b)
    assert A.apply(y) == b


def test_rank_of_dependent_rows():
    rows = [[k1, k2], [k1 * k3, k2 * k3]]
    assert rank(ParamMatrix(rows)) == 1
    assert determinant(ParamMatrix(rows)).is_zero()
    assert rank(ParamMatrix([])) == 0


@given(st.integers(1, 4))
def test_identity_matrix(n):
    assert rank(ParamMatrix.identity(n)) == n
    assert determinant(ParamMatrix.identity(n)).is_one()
