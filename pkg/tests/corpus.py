"""Deterministic test instances shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction

from gkz.errors import NonGenericWeight
from gkz.geometry import is_generic_weight, make_configuration
from gkz.lattice import rank

SMALL = [[1, 1, 1], [0, 1, 2]]
RANK11 = [
    [1, 1, 1, 1, 1, 1, 1, 1, 1],
    [0, 1, 2, 3, 0, 2, 0, 1, 0],
    [0, 0, 0, 0, 1, 1, 2, 2, 3],
]
BETA0 = (1, 1, 1)

# simplex configurations with a unimodular regular triangulation
UNIMODULAR = [
    ([[1, 1, 1], [0, 1, 2]], (0, -1, 0)),
    ([[1, 1, 1, 1], [0, 1, 2, 3]], (0, 1, 4, 9)),
    ([[1, 1, 1, 1, 1], [0, 1, 2, 3, 4]], (0, 1, 4, 9, 16)),
    ([[1, 1, 1, 1, 1, 1], [0, 1, 2, 0, 1, 0], [0, 0, 0, 1, 1, 2]], (0, 0, 1, 0, 2, 4)),
    ([[1, 1, 1, 1], [0, 1, 2, 0], [0, 0, 0, 1]], (0, -1, 0, 0)),
]

# instances where the printed inclusion-exclusion term vol(intersection) differs
# from the number of covered classes: (A, w, beta, number of log-free series)
COVERAGE_CASES = [
    ([[1] * 6, [0, 0, 1, 1, 1, 3], [1, 4, 1, 2, 4, 1]], (6, 4, 5, 3, 1, -6), (5, 6, 5), 9),
    ([[1] * 5, [0, 0, 1, 2, 2], [0, 1, 2, 2, 4]], (-6, -3, -2, -2, 0), (6, 4, 5), 4),
]


def random_configuration(rng: random.Random, max_entry: int = 4):
    """First row of ones, other rows in [0, max_entry], distinct columns, full rank."""
    while True:
        d = rng.choice([2, 3])
        n = rng.randint(d, 6 if d == 3 else 5)
        cols = set()
        while len(cols) < n:
            cols.add(tuple(rng.randint(0, max_entry) for _ in range(d - 1)))
        cols = sorted(cols)
        A = [[1] * n] + [[c[i] for c in cols] for i in range(d - 1)]
        if rank(A) == d:
            return make_configuration(A)


def random_generic_weight(rng: random.Random, cfg, spread: int = 6):
    for _ in range(200):
        w = tuple(rng.randint(-spread, spread) for _ in range(cfg.n))
        if is_generic_weight(cfg, w):
            return w
    raise NonGenericWeight("no generic weight found")


def random_parameter(rng: random.Random, cfg, rational: bool = False):
    y = [rng.randint(0, 2) for _ in range(cfg.n)]
    z = [rng.randint(0, 1) for _ in range(cfg.n)]
    beta = [sum(cfg.A[i][j] * (y[j] - z[j]) for j in range(cfg.n)) for i in range(cfg.d)]
    if rational:
        den = rng.choice([2, 3])
        beta = [Fraction(b) + Fraction(rng.randint(0, den - 1), den) for b in beta]
    return tuple(Fraction(b) for b in beta)


def random_corpus(seed: int = 20240611, count: int = 50):
    """Triples (cfg, w, beta).  The weight is redrawn until it is generic for
    the triangulation and the exponent integer programs of beta have unique
    optima (term-order genericity, which a random small weight can miss)."""
    from gkz.series import minex

    rng = random.Random(seed)
    out = []
    while len(out) < count:
        cfg = random_configuration(rng)
        beta = random_parameter(rng, cfg, rational=rng.random() < 0.3)
        for _ in range(20):
            w = random_generic_weight(rng, cfg)
            try:
                minex(cfg, beta, w, check=False)
            except NonGenericWeight:
                continue
            out.append((cfg, w, beta))
            break
    return out
