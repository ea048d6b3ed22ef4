"""Monomial orders given by integer matrices.

``x^a > x^b`` iff the first nonzero entry of ``M (a - b)`` is positive.
Comparison goes through ``key(a) = M a``: tuples compare lexicographically,
so ``key(a) > key(b)`` decides the order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class InvalidOrderMatrix(ValueError):
    pass


def _rank(rows: Sequence[Sequence[int]]) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    r, ncols = 0, len(m[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            f = m[i][c] / m[r][c]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


class MonomialOrder:
    __slots__ = ("matrix", "variables", "kind", "_cache", "_fast")

    def __init__(self, matrix: Sequence[Sequence[int]], variables: Sequence[str], kind: str = "custom",
                 *, _trusted: bool = False):
        self.matrix = tuple(tuple(int(x) for x in row) for row in matrix)
        self.variables = tuple(variables)
        self.kind = kind
        self._cache: dict = {}
        n = len(self.variables)
        if not _trusted:
            if any(len(r) != n for r in self.matrix):
                raise InvalidOrderMatrix("order matrix must have one column per variable")
            if len(set(self.variables)) != n:
                raise InvalidOrderMatrix("duplicate variable names")
            if _rank(self.matrix) != n:
                raise InvalidOrderMatrix("order matrix is not of full rank")
            for j in range(n):
                col = [r[j] for r in self.matrix if r[j] != 0]
                if not col or col[0] < 0:
                    raise InvalidOrderMatrix(f"variable {self.variables[j]!r} is not greater than 1")
        self._fast = kind if kind in ("lex", "grevlex") and self.matrix == _default_matrix(kind, n) else None

    def key(self, e: Sequence[int]) -> tuple:
        k = self._cache.get(e)
        if k is None:
            if self._fast == "lex":
                k = tuple(e)
            elif self._fast == "grevlex":
                k = (sum(e),) + tuple(-x for x in reversed(e[1:]))
            else:
                k = tuple(sum(a * b for a, b in zip(row, e)) for row in self.matrix)
            self._cache[e] = k
        return k

    def greater(self, a: Sequence[int], b: Sequence[int]) -> bool:
        return self.key(tuple(a)) > self.key(tuple(b))

    def compare(self, a, b) -> int:
        ka, kb = self.key(tuple(a)), self.key(tuple(b))
        return (ka > kb) - (ka < kb)

    def is_elimination_for(self, eliminate: Sequence[str]) -> bool:
        """Sufficient check that every monomial involving ``eliminate`` beats
        every monomial in the remaining variables."""
        elim = {self.variables.index(v) for v in eliminate}
        keep = [j for j in range(len(self.variables)) if j not in elim]
        prefix = []
        for row in self.matrix:
            if any(row[j] != 0 for j in keep):
                break
            prefix.append(row)
        for j in elim:
            col = [r[j] for r in prefix if r[j] != 0]
            if not col or col[0] < 0:
                return False
        return True

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.matrix == other.matrix and self.variables == other.variables

    def __hash__(self):
        return hash((self.matrix, self.variables))

    def __repr__(self) -> str:
        return f"MonomialOrder({self.kind}, {list(self.variables)})"

    def to_json(self) -> dict:
        return {"kind": self.kind, "variables": list(self.variables), "matrix": [list(r) for r in self.matrix]}


def _default_matrix(kind: str, n: int) -> tuple:
    if kind == "lex":
        return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    rows = [tuple([1] * n)]
    for i in range(1, n):
        rows.append(tuple(-1 if j == n - i else 0 for j in range(n)))
    return tuple(rows)


def lex(variables: Sequence[str]) -> MonomialOrder:
    """Lexicographic order with ``variables[0] > variables[1] > ...``."""
    return MonomialOrder(_default_matrix("lex", len(variables)), variables, "lex", _trusted=True)


def grevlex(variables: Sequence[str]) -> MonomialOrder:
    """Graded reverse lexicographic order, first row all ones, then -1 anti-diagonal."""
    return MonomialOrder(_default_matrix("grevlex", len(variables)), variables, "grevlex", _trusted=True)


def block_extend(order: MonomialOrder, new_variables: Sequence[str]) -> MonomialOrder:
    """Prepend ``new_variables`` with an identity block: ``[[Id, 0], [0, Q]]``."""
    m, n = len(new_variables), len(order.variables)
    rows = [tuple(1 if i == j else 0 for j in range(m)) + (0,) * n for i in range(m)]
    rows += [(0,) * m + row for row in order.matrix]
    return MonomialOrder(rows, tuple(new_variables) + order.variables, "block", _trusted=True)


def block(first: MonomialOrder, second: MonomialOrder) -> MonomialOrder:
    """Block order: compare with ``first`` on its variables, then ``second``."""
    m, n = len(first.variables), len(second.variables)
    rows = [row + (0,) * n for row in first.matrix] + [(0,) * m + row for row in second.matrix]
    return MonomialOrder(rows, first.variables + second.variables, "block", _trusted=True)


def make_order(kind: str, variables: Sequence[str], matrix: Sequence[Sequence[int]] | None = None) -> MonomialOrder:
    if kind == "lex":
        return lex(variables)
    if kind == "grevlex":
        return grevlex(variables)
    if kind in ("custom", "block"):
        if matrix is None:
            raise InvalidOrderMatrix(f"{kind} order needs a matrix")
        return MonomialOrder(matrix, variables, kind)
    raise InvalidOrderMatrix(f"unknown order kind {kind!r}")
