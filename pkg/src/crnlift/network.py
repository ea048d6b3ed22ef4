"""Reaction networks: data model, text format, steady-state polynomials.

File format (UTF-8)::

    # comment
    species: X1 X2 X3          (optional; fixes the species order)
    intermediates: Y1 Y2       (optional; a hint used by --intermediates=file)
    X1 + X2 <=>[kappa1][kappa2] Y1 -> 2X2 ; Y1 ->[kappa5] Y3

Reactions are separated by newlines or ``;``.  ``0`` is the empty complex.
Chains ``A -> B -> C`` are split pairwise.  Unlabelled reactions receive
``<prefix><i>`` with ``i`` the 1-based reaction position.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebra import ParamScalar, XPoly


class NetworkError(ValueError):
    """Malformed network text or an invalid network."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Species:
    name: str
    index: int


@dataclass(frozen=True, order=True)
class Complex:
    """Non-negative integer combination of species, keyed by species name.

    Stored as a tuple of ``(name, coefficient)`` pairs sorted by name, with
    every coefficient positive; the zero complex is the empty tuple.
    """

    coefficients: tuple[tuple[str, int], ...] = ()

    @classmethod
    def from_dict(cls, d: Mapping[str, int]) -> "Complex":
        for name, c in d.items():
            if int(c) != c or c < 0:
                raise NetworkError(f"invalid stoichiometric coefficient {c!r} for {name}")
        return cls(tuple(sorted((n, int(c)) for n, c in d.items() if c)))

    @classmethod
    def single(cls, name: str) -> "Complex":
        return cls(((name, 1),))

    def get(self, name: str) -> int:
        for n, c in self.coefficients:
            if n == name:
                return c
        return 0

    def as_dict(self) -> dict[str, int]:
        return dict(self.coefficients)

    def species(self) -> set[str]:
        return {n for n, _ in self.coefficients}

    def is_zero(self) -> bool:
        return not self.coefficients

    def is_species(self, name: str) -> bool:
        return self.coefficients == ((name, 1),)

    def exponents(self, species: Sequence[str]) -> tuple[int, ...]:
        d = self.as_dict()
        return tuple(d.get(s, 0) for s in species)

    def render(self, species_order: Sequence[str] | None = None) -> str:
        if not self.coefficients:
            return "0"
        d = self.as_dict()
        names = [s for s in species_order if s in d] if species_order else sorted(d)
        return " + ".join(n if d[n] == 1 else f"{d[n]}{n}" for n in names)

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Reaction:
    reactant: Complex
    product: Complex
    rate: str

    def __post_init__(self):
        if self.reactant == self.product:
            raise NetworkError(f"reaction {self.reactant} -> {self.product} has equal reactant and product")

    def render(self, species_order: Sequence[str] | None = None) -> str:
        return f"{self.reactant.render(species_order)} ->[{self.rate}] {self.product.render(species_order)}"


def variable_names(species: Sequence[str]) -> tuple[str, ...]:
    """Concentration variable per species: the lower-cased name, or the
    verbatim name when lower-casing would collide."""
    lowered = [s.lower() for s in species]
    counts: dict[str, int] = {}
    for v in lowered:
        counts[v] = counts.get(v, 0) + 1
    out = []
    for s, v in zip(species, lowered):
        out.append(v if counts[v] == 1 and (v == s or v not in species) else s)
    return tuple(out)


@dataclass(frozen=True)
class ReactionNetwork:
    species: tuple[Species, ...]
    reactions: tuple[Reaction, ...]
    intermediates_hint: tuple[str, ...] = ()
    _variables: tuple[str, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        names = [s.name for s in self.species]
        if len(set(names)) != len(names):
            raise NetworkError("duplicate species names")
        known = set(names)
        seen_pairs = set()
        seen_rates = set()
        for r in self.reactions:
            for n in r.reactant.species() | r.product.species():
                if n not in known:
                    raise NetworkError(f"reaction uses undeclared species {n!r}")
            if (r.reactant, r.product) in seen_pairs:
                raise NetworkError(f"duplicate reaction {r.reactant} -> {r.product}")
            if r.rate in seen_rates:
                raise NetworkError(f"duplicate rate symbol {r.rate!r}")
            seen_pairs.add((r.reactant, r.product))
            seen_rates.add(r.rate)
        variables = variable_names(names)
        clash = set(variables) & seen_rates
        if clash:
            raise NetworkError(f"rate symbols collide with concentration variables: {sorted(clash)}")
        object.__setattr__(self, "_variables", variables)

    @classmethod
    def build(cls, species: Iterable[str], reactions: Iterable[Reaction],
              intermediates_hint: Iterable[str] = ()) -> "ReactionNetwork":
        return cls(tuple(Species(n, i) for i, n in enumerate(species)), tuple(reactions), tuple(intermediates_hint))

    @property
    def species_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.species)

    @property
    def variables(self) -> tuple[str, ...]:
        return self._variables

    def variable_of(self, species_name: str) -> str:
        return self._variables[self.species_names.index(species_name)]

    @property
    def complexes(self) -> tuple[Complex, ...]:
        """Reactants and products in order of first appearance."""
        seen: dict[Complex, None] = {}
        for r in self.reactions:
            seen.setdefault(r.reactant, None)
            seen.setdefault(r.product, None)
        return tuple(seen)

    @property
    def rate_symbols(self) -> tuple[str, ...]:
        return tuple(r.rate for r in self.reactions)

    def reaction_between(self, c: Complex, d: Complex) -> Reaction | None:
        for r in self.reactions:
            if r.reactant == c and r.product == d:
                return r
        return None

    def render(self) -> str:
        order = self.species_names
        lines = ["species: " + " ".join(order)]
        if self.intermediates_hint:
            lines.append("intermediates: " + " ".join(self.intermediates_hint))
        lines += [r.render(order) for r in self.reactions]
        return "\n".join(lines) + "\n"

    def monomial(self, c: Complex) -> tuple[int, ...]:
        return c.exponents(self.species_names)


# parsing -------------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>[ \t]+)|(?P<frac>\d+[./]\d*)|(?P<arrow><=>|->)|(?P<label>\[[^\]]*\])|(?P<plus>\+)"
    r"|(?P<term>(?:\d+\s*\*?\s*)?[A-Za-z_][A-Za-z0-9_]*)|(?P<zero>0(?![0-9A-Za-z_]))|(?P<bad>\S)"
)
_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_TERM = re.compile(r"^(\d*)\s*\*?\s*([A-Za-z_][A-Za-z0-9_]*)$")


def _parse_statement(text: str, line: int, col0: int):
    """Return [(complex dict, col), (arrow, labels, col), (complex dict, col), ...]."""
    items: list = []
    current: dict | None = None
    cur_col = None
    expect_term = True
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        kind = m.lastgroup
        val = m.group(kind)
        col = col0 + pos
        pos = m.end()
        if kind == "ws":
            continue
        if kind == "frac":
            raise NetworkError("negative or non-integer stoichiometric coefficient", line, col)
        if kind == "bad":
            if val == "-" or val == ".":
                raise NetworkError("negative or non-integer stoichiometric coefficient", line, col)
            raise NetworkError(f"unexpected character {val!r}", line, col)
        if kind in ("term", "zero"):
            if not expect_term:
                raise NetworkError(f"expected '+' or an arrow before {val!r}", line, col)
            if pos < len(text) and text[pos] == ".":
                raise NetworkError("negative or non-integer stoichiometric coefficient", line, col)
            if current is None:
                current, cur_col = {}, col
            if kind == "zero":
                if current:
                    raise NetworkError("'0' cannot be combined with other terms", line, col)
                current["__zero__"] = 0
            else:
                tm = _TERM.match(val)
                n = int(tm.group(1)) if tm.group(1) else 1
                if n == 0:
                    raise NetworkError("zero stoichiometric coefficient", line, col)
                if "__zero__" in current:
                    raise NetworkError("'0' cannot be combined with other terms", line, col)
                name = tm.group(2)
                current[name] = current.get(name, 0) + n
            expect_term = False
        elif kind == "plus":
            if expect_term:
                raise NetworkError("'+' without a preceding term", line, col)
            expect_term = True
        elif kind == "arrow":
            if current is None or expect_term:
                raise NetworkError(f"arrow {val!r} without a complex on its left", line, col)
            current.pop("__zero__", None)
            items.append((current, cur_col))
            current = None
            labels = []
            while True:
                while pos < len(text) and text[pos] in " \t":
                    pos += 1
                lm = _TOKEN.match(text, pos)
                if lm and lm.lastgroup == "label":
                    lab = lm.group("label")[1:-1].strip()
                    if not _IDENT.match(lab):
                        raise NetworkError(f"invalid rate label {lab!r}", line, col0 + pos)
                    labels.append(lab)
                    pos = lm.end()
                else:
                    break
            items.append((val, labels, col))
            expect_term = True
        elif kind == "label":
            raise NetworkError("rate label must follow an arrow", line, col)
    if current is None or expect_term:
        if items:
            raise NetworkError("reaction ends without a product complex", line, col0 + len(text))
        return []
    current.pop("__zero__", None)
    items.append((current, cur_col))
    if len(items) == 1:
        raise NetworkError("complex without a reaction arrow", line, cur_col)
    return items


def parse_network(text: str, rate_prefix: str = "k") -> ReactionNetwork:
    """Parse the network text format; errors carry line and column."""
    declared: list[str] | None = None
    hint: list[str] = []
    raw: list = []  # (reactant, product, label or None, line, col)
    seen_names: dict[str, None] = {}  # species in order of first appearance
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        body = rawline.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        low = stripped.lower()
        if low.startswith("species:") or low.startswith("intermediates:"):
            key, rest = stripped.split(":", 1)
            names = rest.replace(",", " ").split()
            for n in names:
                if not _IDENT.match(n):
                    raise NetworkError(f"invalid species name {n!r}", lineno, body.index(n) + 1)
            if key.lower() == "species":
                if declared is not None:
                    raise NetworkError("repeated species header", lineno, 1)
                if len(set(names)) != len(names):
                    raise NetworkError("duplicate name in species header", lineno, 1)
                declared = names
            else:
                hint.extend(names)
            continue
        offset = 0
        for part in body.split(";"):
            lead = len(part) - len(part.lstrip())
            items = _parse_statement(part.strip(), lineno, offset + lead + 1)
            offset += len(part) + 1
            for j in range(0, len(items) - 2, 2):
                left, _ = items[j]
                arrow, labels, acol = items[j + 1]
                right, _ = items[j + 2]
                seen_names.update(dict.fromkeys(left))
                seen_names.update(dict.fromkeys(right))
                lc, rc = Complex.from_dict(left), Complex.from_dict(right)
                if arrow == "->":
                    if len(labels) > 1:
                        raise NetworkError("'->' takes at most one rate label", lineno, acol)
                    raw.append((lc, rc, labels[0] if labels else None, lineno, acol))
                else:
                    if len(labels) not in (0, 2):
                        raise NetworkError("'<=>' takes zero or two rate labels", lineno, acol)
                    raw.append((lc, rc, labels[0] if labels else None, lineno, acol))
                    raw.append((rc, lc, labels[1] if labels else None, lineno, acol))
    if not raw and not declared:
        raise NetworkError("empty network: no species and no reactions")

    order: list[str] = list(declared or [])
    known = set(order)
    for n in seen_names:
        if n not in known:
            known.add(n)
            order.append(n)
    for n in hint:
        if n not in known:
            raise NetworkError(f"intermediate {n!r} is not a species")

    reactions: list[Reaction] = []
    seen: dict = {}
    rates: dict = {}
    for i, (lc, rc, label, ln, col) in enumerate(raw, start=1):
        if lc == rc:
            raise NetworkError("reactant and product are equal", ln, col)
        if (lc, rc) in seen:
            raise NetworkError(f"duplicate reaction {lc.render(order)} -> {rc.render(order)} "
                               f"(first on line {seen[(lc, rc)]})", ln, col)
        seen[(lc, rc)] = ln
        rate = label or f"{rate_prefix}{i}"
        if rate in rates:
            raise NetworkError(f"duplicate rate symbol {rate!r} (first on line {rates[rate]})", ln, col)
        rates[rate] = ln
        reactions.append(Reaction(lc, rc, rate))
    return ReactionNetwork.build(order, reactions, hint)


def load_network(path, rate_prefix: str = "k") -> ReactionNetwork:
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read(), rate_prefix)


# polynomials ---------------------------------------------------------------

def stoichiometric_matrix(N: ReactionNetwork) -> list[list[int]]:
    """Rows are species, columns reactions: entry ``c'_i - c_i``."""
    names = N.species_names
    return [[r.product.get(s) - r.reactant.get(s) for r in N.reactions] for s in names]


def steady_state_polynomials(N: ReactionNetwork, variables: Sequence[str] | None = None) -> list[XPoly]:
    """``F_i = sum (c'_i - c_i) k x^c`` for every species, in species order.

    ``variables`` may re-embed the polynomials into a larger ring; it must
    contain ``N.variables``.
    """
    own = N.variables
    names = N.species_names
    out: dict[int, dict] = {i: {} for i in range(len(names))}
    for r in N.reactions:
        e = r.reactant.exponents(names)
        k = ParamScalar.symbol(r.rate)
        for i, s in enumerate(names):
            d = r.product.get(s) - r.reactant.get(s)
            if not d:
                continue
            terms = out[i]
            v = terms.get(e)
            t = k * d
            v = t if v is None else v + t
            if v.is_zero():
                terms.pop(e, None)
            else:
                terms[e] = v
    polys = [XPoly(own, out[i]) for i in range(len(names))]
    if variables is not None:
        polys = [f.with_variables(variables) for f in polys]
    return polys


def _row_reduce(rows: Sequence[Sequence[int]]):
    """Greedy row basis with bookkeeping.

    Returns the indices of rows that increase the rank (in order) and, for
    every other row, its coefficients over the chosen rows.
    """
    n = len(rows)
    basis: list[tuple[int, list[Fraction], dict[int, Fraction]]] = []
    chosen: list[int] = []
    deps: dict[int, dict[int, Fraction]] = {}
    for idx, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        combo = {idx: Fraction(1)}  # v = sum combo[j] * rows[j]
        for piv, b, bc in basis:
            if v[piv]:
                f = v[piv] / b[piv]
                v = [a - f * c for a, c in zip(v, b)]
                for j, a in bc.items():
                    combo[j] = combo.get(j, Fraction(0)) - f * a
        piv = next((j for j, a in enumerate(v) if a), None)
        if piv is not None:
            basis.append((piv, v, combo))
            chosen.append(idx)
        else:
            # 0 = rows[idx] + sum_{j != idx} combo[j] rows[j]
            deps[idx] = {j: -a for j, a in combo.items() if j != idx and a}
    assert len(chosen) + len(deps) == n
    return chosen, deps


def stoichiometric_basis(N: ReactionNetwork) -> tuple[int, list[int]]:
    """``(dim S, species indices)``: a greedy row basis of the stoichiometric matrix."""
    if not N.reactions:
        return 0, []
    idx, _ = _row_reduce(stoichiometric_matrix(N))
    return len(idx), idx


def dependency_coefficients(N: ReactionNetwork) -> dict[int, dict[int, Fraction]]:
    """For each unselected species i: rationals ``a_j`` with ``F_i = sum a_j F_j``
    over the selected species j."""
    if not N.reactions:
        return {i: {} for i in range(len(N.species))}
    _, deps = _row_reduce(stoichiometric_matrix(N))
    return deps


def steady_state_ideal(N: ReactionNetwork, minimal: bool = False) -> list[XPoly]:
    """Generators of the steady-state ideal; with ``minimal`` only the dim(S)
    selected polynomials.  Identically zero polynomials are dropped."""
    F = steady_state_polynomials(N)
    if minimal:
        _, sel = stoichiometric_basis(N)
        F = [F[i] for i in sel]
    return [f for f in F if not f.is_zero()]


def detect_enzymes(N: ReactionNetwork) -> list[Species]:
    """Species occurring in some reaction with equal coefficient on both sides of every reaction."""
    out = []
    F = steady_state_polynomials(N)
    for s, f in zip(N.species, F):
        used = any(s.name in r.reactant.species() | r.product.species() for r in N.reactions)
        if used and all(r.reactant.get(s.name) == r.product.get(s.name) for r in N.reactions):
            assert f.is_zero(), f"enzyme {s.name} has a nonzero steady-state polynomial"
            out.append(s)
    return out
