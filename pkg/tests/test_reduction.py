import random

import pytest
from hypothesis import given, settings, strategies as st

from crnlift import networks
from crnlift.algebra import ParamScalar, XPoly, parse_scalar, parse_xpoly
from crnlift.generate import random_network
from crnlift.groebner import block_extend, buchberger, grevlex, ideal_membership
from crnlift.network import Complex, parse_network, steady_state_polynomials
from crnlift.reduction import (
    IndependenceNotVerified,
    IntermediateError,
    NoInflow,
    NonzeroCoefficientElsewhere,
    NoOutflow,
    NotAComplex,
    SingularIntermediateSystem,
    TreeCapExceeded,
    apply_phi,
    detect_intermediates,
    intermediate_components,
    mu_spanning_tree,
    reduce_network,
    validate_intermediates,
    verify_reduction,
)

S = parse_scalar


def C(**kw):
    return Complex.from_dict(kw)


# validation ----------------------------------------------------------------------

@pytest.mark.parametrize(
    "text, Y, error",
    [
        ("species: A B Y\nA + B -> A", ["Y"], NotAComplex),
        ("A + B -> Y + A\nY -> B", ["Y"], NonzeroCoefficientElsewhere),
        ("A -> Y\nY -> B\nY + A -> B", ["Y"], NonzeroCoefficientElsewhere),
        ("Y -> A\nA -> B", ["Y"], NoInflow),
        ("A -> Y\nB -> A", ["Y"], NoOutflow),
        ("A -> Y\nY -> B", ["Z"], IntermediateError),
        ("A -> Y1\nY1 -> Y2\nY2 -> Y1", ["Y1", "Y2"], SingularIntermediateSystem),
    ],
)
def test_invalid_intermediates_are_rejected(text, Y, error):
    N = parse_network(text)
    with pytest.raises(error):
        validate_intermediates(N, Y)


def test_detection_finds_every_intermediate():
    assert detect_intermediates(networks.load("mapk")).members == ("Y1", "Y2", "Y3", "Y4", "Y5", "Y6")
    assert detect_intermediates(networks.load("triangle")).members == ("Y1", "Y2", "Y3")
    assert detect_intermediates(networks.load("binding_release")).members == ("X4",)
    assert detect_intermediates(networks.load("autocatalysis")).members == ()


def test_detection_drops_a_trapped_cycle():
    N = parse_network("A -> Y1\nY1 -> Y2\nY2 -> Y1\nB -> Y3\nY3 -> A")
    assert detect_intermediates(N).members == ("Y2", "Y3")


def test_intermediate_components():
    N = networks.load("mapk")
    assert intermediate_components(N, N.intermediates_hint) == [["Y1"], ["Y2"], ["Y3", "Y4"], ["Y5", "Y6"]]


# mu, core, phi and H ---------------------------------------------------------------

def test_triangle_mu_values(triangle):
    X12, X11 = C(X1=1, X2=1), C(X1=2)
    assert triangle.mu.get(0, X12) == S("kappa1/(kappa2 + kappa3 + kappa5)")
    assert triangle.mu.get(1, X12) == S("kappa1*kappa3/((kappa2 + kappa3 + kappa5)*kappa4)")
    assert triangle.mu.get(2, X12) == S("kappa1*kappa5/((kappa2 + kappa3 + kappa5)*(kappa6 + kappa8))")
    assert triangle.mu.get(2, X11) == S("kappa7/(kappa6 + kappa8)")
    assert triangle.mu.get(0, X11).is_zero()


def test_triangle_core_and_phi(triangle):
    assert [r.render() for r in triangle.core.reactions] == [
        "X1 + X2 ->[k1] 2X2", "X1 + X2 ->[k2] 2X1", "2X1 ->[k3] 2X2",
    ]
    d = S("(kappa2 + kappa3 + kappa5)*(kappa6 + kappa8)")
    assert triangle.phi["k1"] == S("kappa1*(kappa3*kappa6 + kappa3*kappa8 + kappa5*kappa8)") / d
    assert triangle.phi["k2"] == S("kappa1*kappa5*kappa6") / d
    assert triangle.phi["k3"] == S("kappa9 + kappa7*kappa8/(kappa6 + kappa8)")
    assert [c.is_new for c in triangle.correspondence] == [True, True, False]


def test_mapk_core_and_h(mapk):
    assert [r.render(mapk.core.species_names) for r in mapk.core.reactions] == [
        "X0 + E ->[k1] E + X1", "E + X1 ->[k2] E + X2", "X2 + F ->[k3] X1 + F", "X1 + F ->[k4] X0 + F",
    ]
    assert mapk.phi["k4"] == S("kappa12*kappa14/(kappa13 + kappa14)")
    h4 = mapk.h_polys[3]
    v = mapk.ring_variables
    assert h4 == parse_xpoly("y4 - (kappa11/kappa10)*x1*f - (kappa7*kappa9/(kappa10*(kappa8 + kappa9)))*x2*f", v)


def test_no_intermediates_is_the_identity():
    N = networks.load("binding_release")
    R = reduce_network(N, [])
    assert R.core.reactions == N.reactions
    assert all(R.phi[r.rate] == ParamScalar.symbol(r.rate) for r in N.reactions)
    assert R.h_polys == []


@pytest.mark.parametrize("name", ["triangle", "mapk", "binding_release", "isomer_chain", "two_input"])
def test_structural_identities_on_the_corpus(name):
    N = networks.load(name, rate_prefix="kappa")
    check = verify_reduction(reduce_network(N, N.intermediates_hint))
    assert check.ok, check.details


def test_structural_identities_on_conradi(conradi):
    assert verify_reduction(conradi, check_basis=False).ok


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_mu_agrees_with_spanning_trees(seed):
    N = random_network(random.Random(seed), max_intermediates=4)
    R = reduce_network(N, N.intermediates_hint)
    for i in range(len(R.intermediates)):
        for c in R.extended.complexes:
            if any(c.get(y) for y in R.intermediates):
                continue
            assert mu_spanning_tree(N, R.intermediates, i, c) == R.mu.get(i, c)
    assert verify_reduction(R, check_basis=False).ok


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_ideal_identity_on_small_random_networks(seed):
    N = random_network(random.Random(seed), n_species=2, max_intermediates=2, max_direct=1)
    assert verify_reduction(reduce_network(N, N.intermediates_hint)).ok


def test_tree_oracle_respects_its_cap(conradi):
    c = next(iter(conradi.mu.support(0)))
    with pytest.raises(TreeCapExceeded):
        mu_spanning_tree(conradi.extended, conradi.intermediates, 0, c, cap=1)


def test_mu_values_are_positive_rational_functions(mapk, conradi):
    for R in (mapk, conradi):
        for v in R.mu.entries.values():
            assert v.has_positive_coefficients()
        for v in R.phi.values():
            assert v.has_positive_coefficients()


# the substitution map --------------------------------------------------------------

def test_phi_requires_the_independence_gate():
    N = networks.load("triangle")
    R = reduce_network(N, N.intermediates_hint)
    with pytest.raises(IndependenceNotVerified):
        apply_phi(R, steady_state_polynomials(R.core)[0])


@settings(max_examples=15)
@given(st.lists(st.tuples(st.integers(-2, 2), st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=3))
def test_phi_is_a_ring_map_that_preserves_membership(mapk, combo):
    """phi(sum a_j x^e F_j) lies in the ideal generated by phi(F)."""
    core_F = [f for f in steady_state_polynomials(mapk.core) if not f.is_zero()]
    v = mapk.core.variables
    f = XPoly.zero(v)
    for j, (a, e1, e2) in enumerate(combo):
        mono = XPoly.monomial(v, (e1, 0, e2, 0, 0), a)
        f = f + mono * core_F[j % len(core_F)]
    images = [apply_phi(mapk, g) for g in core_F]
    order = block_extend(grevlex(mapk.x_vars), mapk.y_vars)
    G = buchberger(images, order)
    assert ideal_membership(apply_phi(mapk, f), G)
    assert apply_phi(mapk, core_F[0] * core_F[1]) == images[0] * images[1]
    assert apply_phi(mapk, core_F[0] + core_F[2]) == images[0] + images[2]
