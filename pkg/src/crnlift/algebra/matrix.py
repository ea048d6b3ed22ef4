"""Fraction-free linear algebra over Q(k)."""

from __future__ import annotations

from typing import Sequence

from .polys import ONE as P_ONE, ParamPoly, lcm
from .scalar import ParamScalar
from .xpoly import XPoly


class SingularSystem(ArithmeticError):
    """The coefficient matrix has identically vanishing determinant."""


class ParamMatrix:
    """Rectangular matrix of reduced ParamScalar entries."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence[ParamScalar]]):
        rows = tuple(tuple(_scalar(x) for x in r) for r in rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("ragged matrix")
        self.rows = rows

    @classmethod
    def zeros(cls, m: int, n: int) -> "ParamMatrix":
        z = ParamScalar.const(0)
        return cls([[z] * n for _ in range(m)])

    @classmethod
    def identity(cls, n: int) -> "ParamMatrix":
        return cls([[ParamScalar.const(1 if i == j else 0) for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "ParamMatrix":
        return ParamMatrix(list(zip(*self.rows))) if self.rows else self

    def permute(self, row_perm: Sequence[int] | None = None, col_perm: Sequence[int] | None = None) -> "ParamMatrix":
        rows = [self.rows[i] for i in row_perm] if row_perm is not None else list(self.rows)
        if col_perm is not None:
            rows = [[r[j] for j in col_perm] for r in rows]
        return ParamMatrix(rows)

    def __matmul__(self, other: "ParamMatrix") -> "ParamMatrix":
        m, n = self.shape
        n2, p = other.shape
        if n != n2:
            raise ValueError("shape mismatch")
        z = ParamScalar.const(0)
        out = []
        for i in range(m):
            row = []
            for j in range(p):
                s = z
                for k in range(n):
                    a = self.rows[i][k]
                    if not a.is_zero():
                        b = other.rows[k][j]
                        if not b.is_zero():
                            s = s + a * b
                row.append(s)
            out.append(row)
        return ParamMatrix(out)

    def apply(self, vec: Sequence[XPoly]) -> list[XPoly]:
        """Matrix times a vector of XPoly."""
        out = []
        for r in self.rows:
            acc = XPoly.zero(vec[0].variables)
            for a, v in zip(r, vec):
                if not a.is_zero():
                    acc = acc + v.scale(a)
            out.append(acc)
        return out

    def __eq__(self, other):
        return isinstance(other, ParamMatrix) and self.rows == other.rows

    def __str__(self) -> str:
        return "[" + ",\n ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows) + "]"


def _scalar(x) -> ParamScalar:
    if isinstance(x, ParamScalar):
        return x
    if isinstance(x, ParamPoly):
        return ParamScalar.from_poly(x)
    return ParamScalar.const(x)


def _clear_row(row: Sequence[ParamScalar]) -> tuple[list[ParamPoly], ParamPoly]:
    """Scale a row to polynomial entries; return entries and the multiplier."""
    mult = P_ONE
    for x in row:
        if not x.den.is_one() and not x.is_zero():
            mult = lcm(mult, x.den) if not mult.is_one() else x.den.primitive()
    out = []
    for x in row:
        if x.is_zero():
            out.append(ParamPoly())
        elif mult.is_one():
            out.append(x.num)
        else:
            out.append(x.num * (mult / x.den))
    return out, mult


def solve_linear(A: ParamMatrix, b: Sequence[XPoly]) -> list[XPoly]:
    """Unique solution of ``A y = b`` by Bareiss elimination and back-substitution.

    Raises SingularSystem when det(A) is identically zero.
    """
    n, n2 = A.shape
    if n != n2:
        raise ValueError("solve_linear needs a square matrix")
    if len(b) != n:
        raise ValueError("right-hand side length mismatch")
    if n == 0:
        return []
    M: list[list[ParamPoly]] = []
    rhs: list[XPoly] = []
    for row, bi in zip(A.rows, b):
        prow, mult = _clear_row(row)
        M.append(prow)
        rhs.append(bi if mult.is_one() else bi.scale(ParamScalar.from_poly(mult)))
    prev = P_ONE
    for k in range(n):
        piv = next((r for r in range(k, n) if M[r][k].terms), None)
        if piv is None:
            raise SingularSystem("coefficient matrix is singular over the parameter field")
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            rhs[k], rhs[piv] = rhs[piv], rhs[k]
        mkk = M[k][k]
        skk = ParamScalar.from_poly(mkk)
        sprev = ParamScalar.from_poly(prev)
        for i in range(k + 1, n):
            mik = M[i][k]
            if not mik.terms:
                # (mkk * M[i][j]) / prev
                for j in range(k + 1, n):
                    if M[i][j].terms:
                        M[i][j] = (mkk * M[i][j]) / prev
                rhs[i] = rhs[i].scale(skk / sprev)
                continue
            for j in range(k + 1, n):
                M[i][j] = (mkk * M[i][j] - mik * M[k][j]) / prev
            rhs[i] = (rhs[i].scale(skk) - rhs[k].scale(ParamScalar.from_poly(mik))).scale(sprev.inverse())
            M[i][k] = ParamPoly()
        prev = mkk
    y: list[XPoly | None] = [None] * n
    for i in range(n - 1, -1, -1):
        acc = rhs[i]
        for j in range(i + 1, n):
            if M[i][j].terms:
                acc = acc - y[j].scale(ParamScalar.from_poly(M[i][j]))
        y[i] = acc.scale(ParamScalar.make(P_ONE, M[i][i]))
    return y  # type: ignore[return-value]


def rank(A: ParamMatrix) -> int:
    """Rank over the parameter field by fraction-free row echelon reduction."""
    m, n = A.shape
    if m == 0 or n == 0:
        return 0
    M = [_clear_row(r)[0] for r in A.rows]
    prev = P_ONE
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if M[i][c].terms), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        mrc = M[r][c]
        for i in range(r + 1, m):
            mic = M[i][c]
            for j in range(c + 1, n):
                v = mrc * M[i][j]
                if mic.terms and M[r][j].terms:
                    v = v - mic * M[r][j]
                M[i][j] = v / prev if v.terms else v
            M[i][c] = ParamPoly()
        prev = mrc
        r += 1
    return r


def determinant(A: ParamMatrix) -> ParamScalar:
    n, n2 = A.shape
    if n != n2:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return ParamScalar.const(1)
    M, scale = [], ParamScalar.const(1)
    for row in A.rows:
        prow, mult = _clear_row(row)
        M.append(prow)
        scale = scale * ParamScalar.from_poly(mult)
    prev, sign = P_ONE, 1
    for k in range(n):
        piv = next((r for r in range(k, n) if M[r][k].terms), None)
        if piv is None:
            return ParamScalar.const(0)
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[k][k] * M[i][j] - M[i][k] * M[k][j]) / prev
            M[i][k] = ParamPoly()
        prev = M[k][k]
    return ParamScalar.make(M[n - 1][n - 1].scale(sign), P_ONE) / scale
