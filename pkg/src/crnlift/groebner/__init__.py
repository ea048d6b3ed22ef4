"""Monomial orders and Buchberger's algorithm over the parameter field."""

from .engine import (
    GroebnerBasis,
    NotEliminationOrder,
    buchberger,
    divide,
    elimination,
    ideal_membership,
    ideals_equal,
    is_binomial_reduced,
    is_groebner_basis,
    is_reduced,
    leading_monomial,
    leading_term,
    reduce_basis,
    remainder,
    s_polynomial,
)
from .orders import InvalidOrderMatrix, MonomialOrder, block, block_extend, grevlex, lex, make_order

__all__ = [
    "GroebnerBasis", "NotEliminationOrder", "buchberger", "divide", "elimination", "ideal_membership",
    "ideals_equal", "is_binomial_reduced", "is_groebner_basis", "is_reduced", "leading_monomial",
    "leading_term", "reduce_basis", "remainder", "s_polynomial", "InvalidOrderMatrix", "MonomialOrder",
    "block", "block_extend", "grevlex", "lex", "make_order",
]
