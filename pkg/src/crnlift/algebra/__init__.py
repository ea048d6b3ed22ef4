"""Exact arithmetic over Q(k): parameter polynomials, their fraction field,
polynomials in concentration variables, and symbolic linear algebra."""

from .matrix import ParamMatrix, SingularSystem, determinant, rank, solve_linear
from .parse import ExpressionError, parse_scalar, parse_xpoly
from .polys import ParamPoly, gcd as param_gcd, lcm as param_lcm
from .scalar import ParamScalar
from .xpoly import VariableMismatch, XPoly

__all__ = [
    "ExpressionError",
    "ParamMatrix",
    "ParamPoly",
    "ParamScalar",
    "SingularSystem",
    "VariableMismatch",
    "XPoly",
    "determinant",
    "param_gcd",
    "param_lcm",
    "parse_scalar",
    "parse_xpoly",
    "rank",
    "solve_linear",
]
