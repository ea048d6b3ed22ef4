"""Random networks with valid intermediates, for property tests and benchmarks.

Every intermediate is produced by some reaction and drains, possibly through
later intermediates, into a non-intermediate complex.  This makes the linear
system for the intermediates nonsingular.
"""

from __future__ import annotations

import itertools
import random

from .network import ReactionNetwork, parse_network


def complex_pool(species: list[str], max_degree: int = 2) -> list[str]:
    """All complexes of total degree 1..max_degree, rendered in the text format."""
    out = []
    for d in range(1, max_degree + 1):
        for combo in itertools.combinations_with_replacement(species, d):
            counts: dict[str, int] = {}
            for s in combo:
                counts[s] = counts.get(s, 0) + 1
            out.append(" + ".join(s if k == 1 else f"{k}{s}" for s, k in counts.items()))
    return out


def random_network_text(
    rng: random.Random,
    n_species: int | None = None,
    n_intermediates: int | None = None,
    max_intermediates: int = 3,
    max_direct: int = 2,
    max_degree: int = 2,
) -> str:
    n = n_species if n_species is not None else rng.randint(2, 3)
    m = n_intermediates if n_intermediates is not None else rng.randint(1, max_intermediates)
    xs = [f"X{i}" for i in range(1, n + 1)]
    ys = [f"Y{i}" for i in range(1, m + 1)]
    pool = complex_pool(xs, max_degree)
    edges: list[tuple[str, str]] = []

    def add(a: str, b: str) -> None:
        if a != b and (a, b) not in edges:
            edges.append((a, b))

    for i, y in enumerate(ys):
        if i == 0 or rng.random() < 0.7:
            add(rng.choice(pool), y)
        else:
            add(ys[rng.randrange(i)], y)
        if i == m - 1 or rng.random() < 0.6:
            add(y, rng.choice(pool))
        else:
            add(y, ys[rng.randrange(i + 1, m)])
        if rng.random() < 0.3:
            add(y, rng.choice(pool))
        if rng.random() < 0.25:
            add(rng.choice(pool), y)
        if m > 1 and rng.random() < 0.3:
            add(y, rng.choice([z for z in ys if z != y]))
    for _ in range(rng.randint(0, max_direct)):
        add(*rng.sample(pool, 2))
    lines = ["species: " + " ".join(xs + ys)]
    if ys:
        lines.append("intermediates: " + " ".join(ys))
    lines += [f"{a} -> {b}" for a, b in edges]
    return "\n".join(lines) + "\n"


def random_network(rng: random.Random, rate_prefix: str = "kappa", **kw) -> ReactionNetwork:
    """A random network whose declared intermediates are valid."""
    return parse_network(random_network_text(rng, **kw), rate_prefix)
