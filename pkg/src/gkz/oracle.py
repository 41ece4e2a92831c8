"""Brute-force reference implementations for small instances.

Each function reaches its answer by a route that shares no search logic
with the main algorithms, so agreement between the two is evidence.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
from typing import Sequence

import numpy as np

from .errors import NonGenericWeight
from .geometry import Configuration, Face, Triangulation, Weight, _assemble, as_weight
from .lattice import Lattice, dot, fvec, inverse, rank, solve
from .params import EClass
from .series import falling_vec, kernel_lattice, negative_support, series_coefficient


def oracle_lower_hull(cfg: Configuration, w, perturb: bool = False) -> Triangulation:
    """Test every d-subset for a supporting hyperplane of the lifted points."""
    w = as_weight(w)
    if perturb:
        w = Weight(w.values, True)
    heights = w.heights()
    cols = cfg.columns
    cells = {}
    for I in combinations(range(cfg.n), cfg.d):
        if rank([cols[i] for i in I]) < cfg.d:
            continue
        covectors = []
        for k in range(len(heights[0])):
            # c with c.a_i = height_i  <=>  A_I^T c = heights
            c = solve([list(cols[i]) for i in I], [heights[i][k] for i in I])
            covectors.append(c)
        signs = []
        for j in range(cfg.n):
            if j in I:
                continue
            gap = [heights[j][k] - dot(covectors[k], cols[j]) for k in range(len(covectors))]
            first = next((x for x in gap if x), 0)
            signs.append((first, j))
        if any(x < 0 for x, _ in signs):
            continue
        on_face = [j for x, j in signs if x == 0]
        if on_face:
            raise NonGenericWeight(f"point {on_face[0] + 1} lies on the lower face {[i + 1 for i in I]}")
        cells[I] = covectors[0]
    if not cells:
        raise NonGenericWeight("no lower cell")
    return _assemble(cfg, w, cells)


def _semigroup_points(cfg: Configuration, degree_bound: int):
    for k in range(degree_bound + 1):
        for combo in combinations_with_replacement(range(cfg.n), k):
            yield tuple(sum(cfg.columns[j][i] for j in combo) for i in range(cfg.d))


def oracle_e_tau(cfg: Configuration, tau: Face, beta, degree_bound: int) -> set:
    """Classes beta - gamma (mod Z(A cap tau)) over gamma in NA up to a degree, that lie in
    the span of tau.  Grows to E_tau(beta) as degree_bound increases."""
    beta = fvec(beta)
    modulus = Lattice.span(cfg.d, [cfg.columns[j] for j in tau.members])
    span_vectors = [cfg.columns[j] for j in tau.members]
    r = rank(span_vectors) if span_vectors else 0
    out = set()
    for gamma in set(_semigroup_points(cfg, degree_bound)):
        x = tuple(b - g for b, g in zip(beta, gamma))
        in_span = rank(span_vectors + [x]) == r if span_vectors else not any(x)
        if not in_span:
            continue
        out.add(EClass(tau, modulus.reduce(x), modulus))
    return out


def _small_moves(cfg: Configuration, reach: int) -> list[tuple[int, ...]]:
    basis = kernel_lattice(cfg).basis
    moves = set()
    for coeffs in product(range(-reach, reach + 1), repeat=len(basis)):
        m = tuple(sum(c * b[j] for c, b in zip(coeffs, basis)) for j in range(cfg.n))
        if any(m):
            moves.add(m)
    return sorted(moves, key=lambda m: (sum(map(abs, m)), m))


def oracle_n_v(cfg: Configuration, v: Sequence, w, order) -> set:
    """Points of N_v with w.u <= order.

    Coordinate bounds of the rational polytope come from linear programs
    (rounded outward); the box is then scanned over a set of free
    coordinates, the rest being forced by A u = 0.
    """
    from scipy.optimize import linprog

    w = as_weight(w)
    v = fvec(v)
    n, d = cfg.n, cfg.d
    ns = negative_support(v)
    ps = frozenset(j for j, x in enumerate(v) if x.denominator == 1 and x >= 0)
    A_eq = [[float(x) for x in row] for row in cfg.A]
    A_ub, b_ub = [[float(x) for x in w.values]], [float(order)]
    for j in range(n):
        if j in ns:  # u_j <= -v_j - 1
            A_ub.append([float(k == j) for k in range(n)])
            b_ub.append(float(-v[j] - 1))
        elif j in ps:  # u_j >= -v_j
            A_ub.append([-float(k == j) for k in range(n)])
            b_ub.append(float(v[j]))
    lo, hi = [], []
    for j in range(n):
        e = [float(k == j) for k in range(n)]
        bounds = []
        for sign in (1, -1):
            res = linprog([sign * x for x in e], A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[0.0] * d,
                          bounds=[(None, None)] * n, method="highs")
            if res.status == 2:  # infeasible polytope
                return set()
            if not res.success:
                raise ValueError("N_v polytope is unbounded for this weight")
            bounds.append(sign * res.fun)
        lo.append(math.floor(bounds[0] - 1e-6))
        hi.append(math.ceil(bounds[1] + 1e-6))
    if n == d:
        return {(0,) * n}
    basis_idx = []
    for j in reversed(range(n)):
        if rank([cfg.columns[i] for i in basis_idx + [j]]) == len(basis_idx) + 1:
            basis_idx.append(j)
    free = [j for j in range(n) if j not in basis_idx]
    Binv = inverse([[cfg.columns[i][r] for i in basis_idx] for r in range(d)])
    D = math.lcm(*(x.denominator for row in Binv for x in row))
    Q = np.array([[int(D * dot(row, cfg.columns[j])) for j in free] for row in Binv], dtype=np.int64)
    wden = math.lcm(*(x.denominator for x in w.values))
    wint = np.array([int(x * wden) for x in w.values], dtype=np.int64)
    order_scaled = math.floor(Fraction(order) * wden)
    out = set()
    first, rest = free[0], free[1:]
    grids = [np.arange(lo[j], hi[j] + 1) for j in rest]
    tail = (np.stack(np.meshgrid(*grids, indexing="ij"), -1).reshape(-1, len(rest))
            if rest else np.zeros((1, 0), dtype=np.int64))
    for x0 in range(lo[first], hi[first] + 1):
        F = np.hstack([np.full((len(tail), 1), x0, dtype=np.int64), tail.astype(np.int64)])
        scaled = -F @ Q.T
        keep = np.all(scaled % D == 0, axis=1)
        F, dep = F[keep], scaled[keep] // D
        U = np.zeros((len(F), n), dtype=np.int64)
        U[:, free] = F
        U[:, basis_idx] = dep
        # w.u <= order and the support conditions, in integers
        keep = U @ wint <= order_scaled
        for j in ns:
            keep &= U[:, j] <= int(-v[j]) - 1
        for j in ps:
            keep &= U[:, j] >= -int(v[j])
        for u in map(tuple, U[keep].tolist()):
            if negative_support([a + b for a, b in zip(v, u)]) == ns:
                out.add(u)
    return out


def oracle_series_check(cfg: Configuration, v: Sequence, w, order=10, reach: int = 1,
                        terms=None) -> bool:
    """Solve for the coefficients of phi_v term by term from two-term box relations
    and compare with the closed form (and with ``terms`` if given).

    Each coefficient must be determined by at least one relation with a
    lower-weight term, and the first two usable relations must agree.
    """
    w = as_weight(w)
    v = fvec(v)
    order = Fraction(order)
    support = oracle_n_v(cfg, v, w, order)
    if terms is not None and {u for u, _ in terms} != support:
        return False
    moves = [m for m in _small_moves(cfg, reach) if w.of(m) > 0]
    ns = negative_support(v)
    known: dict[tuple[int, ...], Fraction] = {}
    for u in sorted(support, key=lambda u: (w.of(u), u)):
        if not any(u):
            known[u] = Fraction(1)
            continue
        values = []
        vu = [a + x for a, x in zip(v, u)]
        # small lattice moves first, then moves onto already solved terms
        candidates = moves + [tuple(x - y for x, y in zip(u, b)) for b in reversed(list(known))]
        for m in candidates:
            den = falling_vec(vu, [max(x, 0) for x in m])
            if den == 0:
                continue
            b = tuple(x - y for x, y in zip(u, m))
            vb = [a + x for a, x in zip(v, b)]
            if b in known:
                cb = known[b]
            elif negative_support(vb) != ns:
                cb = Fraction(0)
            else:
                continue
            values.append(cb * falling_vec(vb, [max(-x, 0) for x in m]) / den)
            if len(values) == 2:
                break
        if not values or len(set(values)) != 1:
            return False
        known[u] = values[0]
    if any(known[u] != series_coefficient(v, u) for u in known):
        return False
    if terms is not None and any(known[u] != c for u, c in terms):
        return False
    return True
