"""Exponents and logarithm-free canonical series phi_v.

An exponent is a rational vector v with A v = beta.  The series attached to
v with minimal negative support is

    phi_v = x^v * sum_{u in N_v} [v]_{u-} / [v+u]_{u+} * x^u,

N_v = {u in L : nsupp(v+u) = nsupp(v)}, truncated here by the weight w.u.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import InternalInconsistency, NonGenericWeight, ZeroDenominator
from .geometry import (
    Configuration,
    Face,
    Triangulation,
    Weight,
    as_weight,
    normalized_volume,
    regular_triangulation,
)
from .lattice import Lattice, dot, fvec, integer_kernel, integer_solve, inverse, solve
from .monoid import DEFAULT_BUDGET, shifted_classes
from .params import EClass, e_tau_witnessed


def is_natural(x: Fraction) -> bool:
    return x.denominator == 1 and x >= 0


def negative_support(v: Sequence) -> frozenset[int]:
    return frozenset(j for j, x in enumerate(v) if Fraction(x).denominator == 1 and x < 0)


def positive_support(v: Sequence) -> frozenset[int]:
    return frozenset(j for j, x in enumerate(v) if is_natural(Fraction(x)))


def non_natural(v: Sequence) -> frozenset[int]:
    """I_v = {j : v_j not in N}."""
    return frozenset(j for j, x in enumerate(v) if not is_natural(Fraction(x)))


@dataclass(frozen=True)
class Exponent:
    """A vector v with A v = beta, with its face tau_v and class lambda_v."""

    v: tuple[Fraction, ...]
    face: Face | None = field(default=None, compare=False)
    eclass: EClass | None = field(default=None, compare=False)

    @property
    def nsupp(self) -> frozenset[int]:
        return negative_support(self.v)

    @property
    def psupp(self) -> frozenset[int]:
        return positive_support(self.v)

    @property
    def non_integer(self) -> frozenset[int]:
        return frozenset(j for j, x in enumerate(self.v) if x.denominator != 1)

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self.v) + ")"


def make_exponent(cfg: Configuration, v: Sequence, T: Triangulation | None = None) -> Exponent:
    v = fvec(v)
    if len(v) != cfg.n:
        raise ValueError(f"exponent has length {len(v)}, expected {cfg.n}")
    if T is None:
        return Exponent(v)
    I = tuple(sorted(non_natural(v)))
    try:
        face = T.face(I)
    except KeyError:
        return Exponent(v)
    modulus = cfg.sublattice(face.members)
    lam = modulus.reduce(cfg.combine([v[j] for j in face.members], face.members))
    return Exponent(v, face, EClass(face, lam, modulus))


@lru_cache(maxsize=256)
def kernel_lattice(cfg: Configuration) -> Lattice:
    """L = {u in Z^n : A u = 0} with HNF basis."""
    return Lattice(cfg.n, tuple(integer_kernel([list(r) for r in cfg.A], cfg.n)))


def in_kernel(cfg: Configuration, u: Sequence) -> bool:
    return all(isinstance(x, int) or Fraction(x).denominator == 1 for x in u) and not any(
        cfg.combine(u)
    )


def in_n_v(cfg: Configuration, v: Sequence, u: Sequence) -> bool:
    """Membership test for N_v."""
    if not in_kernel(cfg, u):
        return False
    v = fvec(v)
    return negative_support(v) == negative_support(tuple(a + b for a, b in zip(v, u)))


def lift_with_nonnegative(cfg: Configuration, v: Sequence, nonneg: frozenset[int] | set[int],
                          budget: int = DEFAULT_BUDGET):
    """Some x in v + L with x_j in N for all j in ``nonneg``, or None."""
    v = fvec(v)
    if any(v[j].denominator != 1 for j in nonneg):
        return None
    free = tuple(j for j in range(cfg.n) if j not in nonneg)
    J = sorted(nonneg)
    target = fvec(cfg.combine([v[j] for j in J], J))
    reach = shifted_classes(cfg, free, target, budget)
    zero = cfg.sublattice(free).reduce((0,) * cfg.d)
    if zero not in reach:
        return None
    y = reach[zero].witness
    rhs = [t - s for t, s in zip(target, cfg.combine(y))]
    if free:
        z = integer_solve([[cfg.columns[j][i] for j in free] for i in range(cfg.d)], rhs)
        if z is None:
            raise InternalInconsistency("class reported reachable but no integer lift exists")
    else:
        z = ()
    x = list(v)
    for j in J:
        x[j] = Fraction(y[j])
    for j, zj in zip(free, z):
        x[j] = v[j] + zj
    return tuple(x)


def has_minimal_negative_support(cfg: Configuration, v: Sequence,
                                 budget: int = DEFAULT_BUDGET) -> bool:
    """True iff no u in L gives nsupp(v+u) strictly inside nsupp(v)."""
    v = fvec(v)
    ps = positive_support(v)
    return all(lift_with_nonnegative(cfg, v, ps | {i}, budget) is None for i in negative_support(v))


def minimize_negative_support(cfg: Configuration, v: Sequence,
                              budget: int = DEFAULT_BUDGET) -> tuple[Fraction, ...]:
    """Shift v by L until its negative support is inclusion-minimal."""
    v = fvec(v)
    while True:
        ps = positive_support(v)
        for i in sorted(negative_support(v)):
            x = lift_with_nonnegative(cfg, v, ps | {i}, budget)
            if x is not None:
                v = x
                break
        else:
            return v


def _ridge_data(cfg: Configuration, T: Triangulation, v: Sequence):
    """Cell containing I_v, outside indices and their positive lifted residuals."""
    I = non_natural(v)
    cell = T.cell_containing(I)
    c = T.covectors[cell.vertices]
    outside = [j for j in range(cfg.n) if j not in cell.vertices]
    rho = {}
    for j in outside:
        r = T.weight.values[j] - dot(c, cfg.columns[j])
        if r <= 0:
            raise NonGenericWeight(
                "series enumeration needs strict lifted residuals for the unperturbed weight"
            )
        rho[j] = r
    return cell, outside, rho


def n_v_points(cfg: Configuration, v: Sequence, T: Triangulation, bound) -> list[tuple[int, ...]]:
    """All u in N_v with w.u <= bound.

    Every u in L is determined by its coordinates off a cell containing I_v,
    and on those coordinates w.u is a positive combination, which makes the
    search finite.
    """
    v = fvec(v)
    bound = Fraction(bound)
    cell, outside, rho = _ridge_data(cfg, T, v)
    verts = list(cell.vertices)
    Ainv = inverse([[cfg.columns[i][r] for i in verts] for r in range(cfg.d)])
    D = math.lcm(*(x.denominator for row in Ainv for x in row))
    # D * u_cell = -sum_j u_j * qj with integer qj
    q = {j: [int(D * dot(row, cfg.columns[j])) for row in Ainv] for j in outside}
    R = bound + sum(rho[j] * v[j] for j in outside)
    nsupp = negative_support(v)
    out = []
    u = [0] * cfg.n

    def leaf(acc):
        for k, i in enumerate(verts):
            if acc[k] % D:
                return
            u[i] = -acc[k] // D
        cand = tuple(u)
        x = [a + b for a, b in zip(v, cand)]
        if negative_support(x) == nsupp:
            out.append(cand)

    def rec(pos, remaining, acc):
        if pos == len(outside):
            leaf(acc)
            return
        j = outside[pos]
        s = 0
        while rho[j] * s <= remaining:
            u[j] = s - int(v[j])
            rec(pos + 1, remaining - rho[j] * s, [a + u[j] * b for a, b in zip(acc, q[j])])
            s += 1

    rec(0, R, [0] * len(verts))
    return [p for p in out if T.weight.of(p) <= bound]


def canonicalize_exponent(cfg: Configuration, v: Sequence, T: Triangulation) -> tuple[Fraction, ...]:
    """v + u* where u* uniquely minimises w.u over N_v."""
    v = fvec(v)
    pts = n_v_points(cfg, v, T, 0)
    keys = sorted((T.weight.key(u), u) for u in pts)
    if len(keys) > 1 and keys[0][0] == keys[1][0]:
        raise NonGenericWeight(f"integer program min w.u over N_v has several optima from {v}")
    best = keys[0][1]
    return tuple(a + b for a, b in zip(v, best))


def _index_classes(cfg: Configuration, tau: Face) -> list[tuple[int, ...]]:
    """Nonnegative t on members(tau) minus vertices, one per class of
    Z(A cap tau) / sum_{vertices} Z a_i, found breadth-first."""
    extra = [j for j in tau.members if j not in tau.vertices]
    vert_lattice = cfg.sublattice(tau.vertices)
    zero = vert_lattice.reduce((0,) * cfg.d)
    seen = {zero: (0,) * cfg.n}
    queue = deque([zero])
    while queue:
        x = queue.popleft()
        t = seen[x]
        for j in extra:
            nx = vert_lattice.reduce(tuple(a + b for a, b in zip(x, cfg.columns[j])))
            if nx not in seen:
                seen[nx] = t[:j] + (t[j] + 1,) + t[j + 1:]
                queue.append(nx)
    return list(seen.values())


def exponents_for(cfg: Configuration, T: Triangulation, tau: Face, lam: EClass, witness,
                  beta, budget: int = DEFAULT_BUDGET) -> list[Exponent]:
    """vol(tau) canonical exponents v with lambda_v-class lam, v_j in N off vert(tau).

    ``witness`` is y in N^n, zero on tau, with beta - A y in the class lam.
    """
    beta = fvec(beta)
    verts = list(tau.vertices)
    x0 = [b - s for b, s in zip(beta, cfg.combine(witness))]
    B = [[cfg.columns[i][r] for i in verts] for r in range(cfg.d)]
    out = []
    for t in _index_classes(cfg, tau):
        v = [Fraction(witness[j]) for j in range(cfg.n)]
        for j in tau.members:
            v[j] = Fraction(t[j])
        rest = [a - b for a, b in zip(x0, cfg.combine(t))]
        if verts:
            coords = solve(B, rest)
            if coords is None:
                raise InternalInconsistency("witness leaves the span of the face")
            for k, i in enumerate(verts):
                v[i] = coords[k]
        elif any(rest):
            raise InternalInconsistency("empty-face witness does not reach beta")
        v = tuple(v)
        if cfg.combine(v) != tuple(beta):
            raise InternalInconsistency(f"constructed exponent {v} misses beta")
        v = minimize_negative_support(cfg, v, budget)
        v = canonicalize_exponent(cfg, v, T)
        out.append(make_exponent(cfg, v, T))
    vol = normalized_volume(cfg, tau)
    if len({e.v for e in out}) != vol:
        raise InternalInconsistency(f"expected {vol} exponents on {tau.label()}, got {len(out)}")
    return out


def covered_by_facet(cfg: Configuration, v: Sequence, tau: Face,
                     budget: int = DEFAULT_BUDGET) -> bool:
    """Whether the class of v mod L is realised with support on a proper face of tau."""
    everything = frozenset(range(cfg.n))
    for i in tau.vertices:
        keep_free = frozenset(tau.vertices) - {i}
        if lift_with_nonnegative(cfg, v, everything - keep_free, budget) is not None:
            return True
    return False


def minex(cfg: Configuration, beta, w, perturb: bool = False,
          budget: int = DEFAULT_BUDGET, check: bool = True) -> list[Exponent]:
    """The fake exponents with minimal negative support (logarithm-free canonical series).

    Each exponent is attributed to the unique (tau, lambda) it arises from
    and is kept only if its class is not realised on a smaller face.
    """
    beta = fvec(beta)
    T = w if isinstance(w, Triangulation) else regular_triangulation(cfg, w, perturb)
    result = []
    for tau in T.faces:
        for lam, reach in e_tau_witnessed(cfg, tau, beta, budget):
            for e in exponents_for(cfg, T, tau, lam, reach.witness, beta, budget):
                if covered_by_facet(cfg, e.v, tau, budget):
                    continue
                if e.face != tau or set(e.face.vertices) != non_natural(e.v):
                    raise InternalInconsistency(f"exponent {e} is not attached to {tau.label()}")
                result.append(e)
    L = kernel_lattice(cfg)
    seen = set()
    for e in result:
        key = (e.face.vertices, L.reduce(e.v))
        if key in seen:
            raise InternalInconsistency(f"two exponents share face and class mod L: {e}")
        seen.add(key)
    if check:
        from .formulas import dim_log_free

        total = dim_log_free(cfg, beta, T, budget=budget).total
        if total != len(result):
            raise InternalInconsistency(f"|Minex| = {len(result)} but the dimension formula gives {total}")
    return sorted(result, key=lambda e: (e.face.sort_key(), e.v))


def falling(x: Fraction, t: int) -> Fraction:
    out = Fraction(1)
    for k in range(t):
        out *= x - k
    return out


def falling_vec(x: Sequence, t: Sequence[int]) -> Fraction:
    out = Fraction(1)
    for xi, ti in zip(x, t):
        if ti:
            out *= falling(xi, ti)
    return out


def series_coefficient(v: Sequence, u: Sequence[int]) -> Fraction:
    """[v]_{u-} / [v+u]_{u+}."""
    v = fvec(v)
    um = [max(-x, 0) for x in u]
    up = [max(x, 0) for x in u]
    den = falling_vec([a + b for a, b in zip(v, u)], up)
    if den == 0:
        raise ZeroDenominator(f"[v+u]_(u+) vanishes for v={v}, u={tuple(u)}")
    return falling_vec(v, um) / den


@dataclass(frozen=True)
class TruncatedSeries:
    base: tuple[Fraction, ...]
    terms: tuple[tuple[tuple[int, ...], Fraction], ...]
    order: Fraction
    weight: Weight

    def coefficient(self, u) -> Fraction:
        return dict(self.terms).get(tuple(u), Fraction(0))

    def __len__(self):
        return len(self.terms)


def phi_series(cfg: Configuration, v, w, order=10, T: Triangulation | None = None) -> TruncatedSeries:
    """Truncation of phi_v to the terms with w.u <= order."""
    v = v.v if isinstance(v, Exponent) else fvec(v)
    if T is None:
        T = regular_triangulation(cfg, w)
    order = Fraction(order)
    pts = n_v_points(cfg, v, T, order)
    terms = sorted(((u, series_coefficient(v, u)) for u in pts),
                   key=lambda t: (T.weight.of(t[0]), t[0]))
    return TruncatedSeries(v, tuple(terms), order, T.weight)


@lru_cache(maxsize=64)
def box_operators(cfg: Configuration, bound: int) -> tuple[tuple[int, ...], ...]:
    """u in L with max|u_j| <= bound, one of each pair +-u, zero excluded."""
    n, d = cfg.n, cfg.d
    if n == d:
        return ()
    basis_idx = []
    for j in range(n):
        if cfg.span_rank(basis_idx + [j]) == len(basis_idx) + 1:
            basis_idx.append(j)
    rest = [j for j in range(n) if j not in basis_idx]
    Ainv = inverse([[cfg.columns[i][r] for i in basis_idx] for r in range(d)])
    D = math.lcm(*(x.denominator for row in Ainv for x in row))
    Q = np.array([[int(D * dot(row, cfg.columns[j])) for j in rest] for row in Ainv], dtype=np.int64)
    grid = np.stack(np.meshgrid(*[np.arange(-bound, bound + 1)] * len(rest), indexing="ij"), -1)
    grid = grid.reshape(-1, len(rest)).astype(np.int64)
    scaled = -grid @ Q.T  # D * u_basis
    ok = np.all(scaled % D == 0, axis=1)
    grid, scaled = grid[ok], scaled[ok] // D
    ok = np.all(np.abs(scaled) <= bound, axis=1)
    grid, scaled = grid[ok], scaled[ok]
    ops = set()
    for g, s in zip(grid.tolist(), scaled.tolist()):
        u = [0] * n
        for j, x in zip(rest, g):
            u[j] = x
        for i, x in zip(basis_idx, s):
            u[i] = x
        u = tuple(u)
        if not any(u):
            continue
        first = next(x for x in u if x)
        ops.add(u if first > 0 else tuple(-x for x in u))
    return tuple(sorted(ops))


@dataclass
class OperatorCheck:
    u: tuple[int, ...]
    guaranteed: Fraction  # residual must vanish at relative weight <= this
    first_nonzero: Fraction | None  # lowest nonzero residual weight inside that range

    @property
    def ok(self) -> bool:
        return self.first_nonzero is None or self.first_nonzero > self.guaranteed


@dataclass
class AnnihilationReport:
    euler_ok: bool
    operators: list[OperatorCheck]

    @property
    def ok(self) -> bool:
        return self.euler_ok and all(op.ok for op in self.operators)

    @property
    def failures(self) -> list[OperatorCheck]:
        return [op for op in self.operators if not op.ok]


def _scaled_falling(E: Sequence[int], t: Sequence[tuple[int, int]], q: int) -> int:
    """q^|t| [E/q]_t for an integer vector E, with t given sparsely as (j, t_j)."""
    out = 1
    for j, tj in t:
        x = E[j]
        for _ in range(tj):
            if not x:
                return 0
            out *= x
            x -= q
    return out


def _falling_vanishes(E: np.ndarray, t: Sequence[tuple[int, int]], q: int) -> np.ndarray:
    """Rows of E (scaled by q) whose falling factorial [E/q]_t is zero."""
    out = np.zeros(len(E), dtype=bool)
    for j, tj in t:
        col = E[:, j]
        out |= (col % q == 0) & (col >= 0) & (col < q * tj)
    return out


def verify_annihilation(s: TruncatedSeries, cfg: Configuration, beta,
                        degree_bound: int = 4) -> AnnihilationReport:
    """Apply the Euler operators and the box operators d^{u+} - d^{u-} (|u|_inf <=
    degree_bound) to a truncated series.

    The residual of a box operator at x^(v+o) is
    c_a [v+a]_(u+) - c_b [v+b]_(u-) with a = o+u+, b = o+u-; it only
    involves terms kept by the truncation when w.o <= order - max(w.u+, w.u-),
    and every such residual is decided exactly.  When only one of a, b is a
    term the residual is a single falling factorial, tested in integers for
    all terms at once; pairs with both terms present are compared exactly.
    """
    beta = fvec(beta)
    w = s.weight
    euler_ok = all(
        tuple(cfg.combine([a + b for a, b in zip(s.base, u)])) == beta for u, _ in s.terms
    )
    n = cfg.n
    q = math.lcm(*(x.denominator for x in s.base))
    wden = math.lcm(*(x.denominator for x in w.values))
    wint = np.array([int(x * wden) for x in w.values], dtype=np.int64)
    order = int(math.floor(s.order * wden))
    U = np.array([u for u, _ in s.terms], dtype=np.int64).reshape(-1, n)
    E = U * q + np.array([int(x * q) for x in s.base], dtype=np.int64)
    W = U @ wint
    span = int(np.abs(U).max(initial=0)) + degree_bound + 1
    radix = 2 * span + 1
    if radix ** n >= 2 ** 62:
        raise ValueError("series too wide for integer keys")
    powers = radix ** np.arange(n, dtype=np.int64)
    keys = U @ powers
    sorted_keys = np.sort(keys)
    index = {k: i for i, k in enumerate(keys.tolist())}
    coeff = [(c.numerator, c.denominator) for _, c in s.terms]
    Elist = E.tolist()

    def present(k):
        pos = np.minimum(np.searchsorted(sorted_keys, k), len(sorted_keys) - 1)
        return sorted_keys[pos] == k

    def lower(cur, new):
        return new if cur is None else min(cur, new)

    checks = []
    for op in box_operators(cfg, degree_bound):
        opv = np.array(op, dtype=np.int64)
        up, um = np.maximum(opv, 0), np.maximum(-opv, 0)
        sp = [(j, int(x)) for j, x in enumerate(up) if x]
        sm = [(j, int(x)) for j, x in enumerate(um) if x]
        wp, wm = int(up @ wint), int(um @ wint)
        g = order - max(wp, wm)
        kop = int(opv @ powers)
        qp, qm = q ** int(up.sum()), q ** int(um.sum())
        lowest = None
        # offsets reached from a term a = o + u+, partner b = a - op
        mask = W - wp <= g
        has_b = present(keys - kop)
        lone = mask & ~has_b & ~_falling_vanishes(E, sp, q)
        if lone.any():
            lowest = lower(lowest, int((W[lone] - wp).min()))
        for i in np.nonzero(mask & has_b)[0].tolist():
            k = index[int(keys[i]) - kop]
            lhs = coeff[i][0] * _scaled_falling(Elist[i], sp, q) * qm * coeff[k][1]
            rhs = coeff[k][0] * _scaled_falling(Elist[k], sm, q) * qp * coeff[i][1]
            if lhs != rhs:
                lowest = lower(lowest, int(W[i]) - wp)
        # offsets reached only from a term b = o + u-
        mask = W - wm <= g
        lone = mask & ~present(keys + kop) & ~_falling_vanishes(E, sm, q)
        if lone.any():
            lowest = lower(lowest, int((W[lone] - wm).min()))
        checks.append(OperatorCheck(
            op, Fraction(g, wden), None if lowest is None else Fraction(lowest, wden)))
    return AnnihilationReport(euler_ok, checks)
