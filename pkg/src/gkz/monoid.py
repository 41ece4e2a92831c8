"""Affine semigroup NA: membership, Hilbert bases, and reachable coset classes.

The central routine is :func:`shifted_classes`.  For a set F of "free"
columns it describes

    { target - A y  mod Z(A_F)  :  y in N^(complement of F),
                                   target - A y in Q(A_F) }

which is the shape of both E_tau(beta) (F = members of tau) and of the
lifting problems met when normalising exponents.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import BudgetExceeded
from .geometry import Configuration
from .lattice import annihilator, dot, fvec, identity, mat_vec

DEFAULT_BUDGET = 64
MAX_STATES = 500_000


@lru_cache(maxsize=4096)
def na_layer(cfg: Configuration, k: int) -> frozenset:
    """All points of NA of degree k (sums of exactly k columns)."""
    if k == 0:
        return frozenset({(0,) * cfg.d})
    prev = na_layer(cfg, k - 1)
    return frozenset(tuple(x + a for x, a in zip(p, col)) for p in prev for col in cfg.columns)


def semigroup_member(cfg: Configuration, gamma: Sequence) -> bool:
    """True iff gamma = A u for some u in N^n."""
    g = fvec(gamma)
    if any(x.denominator != 1 for x in g):
        return False
    k = cfg.degree(g)
    if k.denominator != 1 or k < 0:
        return False
    return tuple(int(x) for x in g) in na_layer(cfg, int(k))


def hilbert_basis(M: Sequence[Sequence[int]], ncols: int, caps: dict | None = None,
                  budget: int = DEFAULT_BUDGET) -> list[tuple[int, ...]]:
    """Minimal nonzero solutions of M x = 0, x in N^ncols (Contejean-Devie).

    ``caps`` maps a coordinate to an upper bound; only basis elements within
    the caps are produced.  Coordinates grow monotonically along the search,
    so pruning on a cap loses no element below it.
    """
    caps = caps or {}
    Me = [tuple(row[i] for row in M) for i in range(ncols)]
    zero = tuple(0 for _ in M)
    basis: list[tuple[int, ...]] = []
    frontier = {}
    for i in range(ncols):
        if caps.get(i, 1) >= 1:
            e = tuple(int(k == i) for k in range(ncols))
            frontier[e] = Me[i]
    degree = 1
    while frontier:
        if degree > budget:
            raise BudgetExceeded(f"Hilbert basis search exceeded total degree {budget}")
        sols = [p for p, mp in frontier.items() if mp == zero]
        basis.extend(sorted(sols))
        nxt = {}
        for p, mp in frontier.items():
            if mp == zero:
                continue
            for i in range(ncols):
                if dot(mp, Me[i]) >= 0:
                    continue
                q = p[:i] + (p[i] + 1,) + p[i + 1:]
                if i in caps and q[i] > caps[i]:
                    continue
                if q in nxt:
                    continue
                if any(all(x >= y for x, y in zip(q, b)) for b in basis):
                    continue
                nxt[q] = tuple(x + y for x, y in zip(mp, Me[i]))
        if len(nxt) > MAX_STATES:
            raise BudgetExceeded("Hilbert basis frontier too large")
        frontier = nxt
        degree += 1
    return basis


def _pointed_grading(vectors: list[tuple], m: int):
    """A rational g with g.v > 0 for every nonzero v, or None if none is found."""
    nz = [v for v in vectors if any(v)]
    if not nz:
        return tuple(Fraction(0) for _ in range(m))
    from scipy.optimize import linprog

    V = [[float(x) for x in v] for v in nz]
    obj = [sum(col) for col in zip(*V)]
    res = linprog(obj, A_ub=[[-x for x in v] for v in V], b_ub=[-1.0] * len(V),
                  bounds=[(None, None)] * m, method="highs")
    if not res.success:
        return None
    for limit in (100, 10_000, 1_000_000):
        g = tuple(Fraction(x).limit_denominator(limit) for x in res.x)
        if all(dot(g, v) > 0 for v in nz):
            return g
    return None


@dataclass(frozen=True)
class Reach:
    """One reachable class: canonical representative and a witness y in N^n."""

    rep: tuple[Fraction, ...]
    witness: tuple[int, ...]


@lru_cache(maxsize=1024)
def _projection(cfg: Configuration, free: tuple[int, ...]):
    """Modulus Z(A_F), annihilator C of its span, projected columns, integer grading."""
    d, n = cfg.d, cfg.n
    nonneg = tuple(j for j in range(n) if j not in set(free))
    modulus = cfg.sublattice(free)
    free_cols = [cfg.columns[j] for j in free]
    C = annihilator(free_cols, d) if free_cols else [tuple(r) for r in identity(d)]
    pcols = {j: tuple(int(x) for x in mat_vec(C, cfg.columns[j])) for j in nonneg}
    if not free:
        grading = tuple(Fraction(x) for x in cfg.h)
    else:
        grading = _pointed_grading([pcols[j] for j in nonneg], len(C))
    if grading is not None:
        den = math.lcm(*(g.denominator for g in grading)) if grading else 1
        grading = tuple(int(g * den) for g in grading)
    return modulus, C, nonneg, pcols, grading


@lru_cache(maxsize=65536)
def shifted_classes(cfg: Configuration, free: tuple[int, ...], target: tuple,
                    budget: int = DEFAULT_BUDGET) -> dict:
    """Map canonical class key -> Reach; see the module docstring."""
    target = fvec(target)
    modulus, C, nonneg, pcols, grading = _projection(cfg, tuple(free))
    b = mat_vec(C, target)
    if C and any(Fraction(x).denominator != 1 for x in b):
        return {}
    b = tuple(int(x) for x in b)
    if grading is not None:
        return _classes_by_search(cfg, modulus, nonneg, pcols, target, b, grading, budget)
    return _classes_by_hilbert(cfg, modulus, nonneg, pcols, target, b, budget)


def _classes_by_search(cfg, modulus, nonneg, pcols, target, b, grading, budget):
    # breadth-first over partial sums A y reduced modulo Z(A_F); the grading
    # is positive on every projected column, so g.(C A y) <= g.(C target) bounds y
    bound = dot(grading, b)
    steps = [(j, dot(grading, pcols[j]), pcols[j], cfg.columns[j]) for j in nonneg]
    zero_rep = modulus.reduce((0,) * cfg.d)
    seen = {zero_rep: ((0,) * cfg.n, tuple(0 for _ in b), 0)}
    queue = deque([zero_rep])
    while queue:
        x = queue.popleft()
        y, px, gx = seen[x]
        for j, gj, pj, col in steps:
            if gx + gj > bound:
                continue
            x_new = modulus.reduce(tuple(s + t for s, t in zip(x, col)))
            if x_new in seen:
                continue
            y_new = y[:j] + (y[j] + 1,) + y[j + 1:]
            if sum(y_new) > budget:
                raise BudgetExceeded(f"class search exceeded total degree {budget}")
            seen[x_new] = (y_new, tuple(s + t for s, t in zip(px, pj)), gx + gj)
            queue.append(x_new)
            if len(seen) > MAX_STATES:
                raise BudgetExceeded("class search state space too large")
    out = {}
    for x, (y, px, _) in seen.items():
        if px == b:
            rep = modulus.reduce(tuple(t - s for t, s in zip(target, x)))
            out.setdefault(rep, Reach(rep, y))
    return out


def _classes_by_hilbert(cfg, modulus, nonneg, pcols, target, b, budget):
    # minimal solutions (last coordinate 1) and homogeneous generators (last 0)
    rows = []
    for i in range(len(b)):
        row = [pcols[j][i] for j in nonneg] + [-b[i]]
        den = math.lcm(*(Fraction(x).denominator for x in row))
        rows.append([int(Fraction(x) * den) for x in row])
    k = len(nonneg)
    hb = hilbert_basis(rows, k + 1, caps={k: 1}, budget=budget)
    starts = [p[:k] for p in hb if p[k] == 1]
    gens = [p[:k] for p in hb if p[k] == 0]

    def widen(p):
        y = [0] * cfg.n
        for j, c in zip(nonneg, p):
            y[j] = c
        return tuple(y)

    out = {}
    queue = deque()
    for p in starts:
        y = widen(p)
        rep = modulus.reduce(tuple(t - s for t, s in zip(target, cfg.combine(y))))
        if rep not in out:
            out[rep] = Reach(rep, y)
            queue.append(rep)
    gen_vecs = [(widen(g), cfg.combine(widen(g))) for g in gens]
    while queue:
        rep = queue.popleft()
        y = out[rep].witness
        for gy, gv in gen_vecs:
            new = modulus.reduce(tuple(r - s for r, s in zip(rep, gv)))
            if new not in out:
                out[new] = Reach(new, tuple(s + t for s, t in zip(y, gy)))
                queue.append(new)
                if len(out) > MAX_STATES:
                    raise BudgetExceeded("class closure too large")
    return out
