"""Dimension of logarithm-free series, simplicial rank, exceptional parameters, CM test."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from .errors import InternalInconsistency, NotSimplex
from .geometry import (
    Configuration,
    Face,
    Triangulation,
    cone_faces,
    configuration_volume,
    facets,
    is_simplex,
    normalized_volume,
    regular_triangulation,
    single_cell_weight,
)
from .lattice import Lattice, QuotientGroup, annihilator, fvec, integer_solve, inverse, lattice_index, mat_vec, dot
from .monoid import DEFAULT_BUDGET, semigroup_member
from .params import EClass, e_tau, natural_map


@dataclass(frozen=True)
class Contribution:
    face: Face
    eclass: EClass
    volume: int
    # (facet vertex sets, signed volume) for each nonempty subset of lifting facets
    corrections: tuple = ()

    @property
    def value(self) -> int:
        return self.volume + sum(v for _, v in self.corrections)

    def formula(self) -> str:
        parts = [str(self.volume)]
        for _, v in self.corrections:
            parts.append(f"{'+' if v >= 0 else '-'}{abs(v)}")
        return "".join(parts)


@dataclass
class DimensionBreakdown:
    contributions: list[Contribution] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(c.value for c in self.contributions)

    def by_volume(self) -> dict[int, int]:
        """Sum of contributions grouped by vol(tau)."""
        out: dict[int, int] = {}
        for c in self.contributions:
            out[c.volume] = out.get(c.volume, 0) + c.value
        return out

    def by_dimension(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for c in self.contributions:
            out[c.face.span_dim] = out.get(c.face.span_dim, 0) + c.value
        return out

    def formula(self) -> str:
        return " + ".join(f"({c.formula()})" for c in self.contributions)


def _triangulation(cfg: Configuration, w) -> Triangulation:
    return w if isinstance(w, Triangulation) else regular_triangulation(cfg, w)


def _covered_classes(cfg: Configuration, tau: Face, lam: EClass, fs, beta, budget) -> dict:
    """For each facet carrying a lift of lam, the classes of
    G = Z(A cap tau) / sum_{vert(tau)} Z a_i represented through one of its lifts.

    A lift lam' covers the coset (lam' - lam) + Z(A cap facet) of G, which has
    vol(facet) elements; a facet with several lifts covers several cosets.
    """
    sup = cfg.sublattice(tau.members)
    base = Lattice.span(cfg.d, [cfg.columns[i] for i in tau.vertices])
    G = QuotientGroup(sup, base)
    elements = [G.lift(e) for e in G.elements()]
    out = {}
    for f in fs:
        lifts = [c for c in e_tau(cfg, f, beta, budget) if natural_map(cfg, c, tau) == lam]
        if not lifts:
            continue
        H = cfg.sublattice(f.members) + base
        covered = set()
        for c in lifts:
            offset = tuple(a - b for a, b in zip(c.rep, lam.rep))
            covered |= {G.class_of(g) for g in elements
                        if tuple(x - y for x, y in zip(g, offset)) in H}
        out[f] = frozenset(covered)
    return out


def dim_log_free(cfg: Configuration, beta, w, budget: int = DEFAULT_BUDGET) -> DimensionBreakdown:
    """Inclusion-exclusion count of logarithm-free series in the direction of w.

    For tau in the triangulation and lambda in E_tau(beta), vol(tau) counts
    the classes of Z(A cap tau) / sum_{vert(tau)} Z a_i.  Every nonempty set S
    of facets carrying a lift of lambda corrects this by (-1)^|S| times the
    number of classes covered through all facets of S.  When each facet
    carries a single lift that number is vol(intersection of S).
    """
    T = _triangulation(cfg, w)
    beta = fvec(beta)
    out = DimensionBreakdown()
    for tau in T.faces:
        classes = e_tau(cfg, tau, beta, budget)
        if not classes:
            continue
        vol = normalized_volume(cfg, tau)
        fs = facets(tau, T)
        for lam in classes:
            covered = _covered_classes(cfg, tau, lam, fs, beta, budget)
            lifting = list(covered)
            corr = []
            for k in range(1, len(lifting) + 1):
                for S in combinations(lifting, k):
                    common = frozenset.intersection(*(covered[f] for f in S))
                    corr.append((tuple(f.vertices for f in S), (-1) ** k * len(common)))
            c = Contribution(tau, lam, vol, tuple(corr))
            if not 0 <= c.value <= vol:
                raise InternalInconsistency(f"contribution {c.formula()} out of range on {tau.label()}")
            out.contributions.append(c)
    return out


def _require_simplex(cfg: Configuration):
    if not is_simplex(cfg):
        raise NotSimplex("conv(A) is not a simplex")


def single_cell_triangulation(cfg: Configuration) -> Triangulation:
    _require_simplex(cfg)
    from .errors import NoSingleCellWeight

    T = regular_triangulation(cfg, single_cell_weight(cfg).values, perturb=True)
    if len(T.cells) != 1:
        raise NoSingleCellWeight("the vertex-height weight does not give a single cell")
    return T


def rank_breakdown(cfg: Configuration, beta, budget: int = DEFAULT_BUDGET) -> DimensionBreakdown:
    return dim_log_free(cfg, beta, single_cell_triangulation(cfg), budget)


def rank_simplex(cfg: Configuration, beta, budget: int = DEFAULT_BUDGET) -> int:
    """rank of the hypergeometric system when conv(A) is a simplex."""
    return rank_breakdown(cfg, beta, budget).total


@dataclass(frozen=True)
class ExceptionalWitness:
    face1: Face
    face2: Face
    meet: Face
    lam: tuple[Fraction, ...]


def _face_by_members(cfg: Configuration, members) -> Face:
    key = tuple(sorted(members))
    for f in cone_faces(cfg):
        if f.members == key:
            return f
    raise InternalInconsistency(f"{key} is not the member set of a cone face")


def condition_violation(cfg: Configuration, beta, budget: int = DEFAULT_BUDGET):
    """A triple (tau1, tau2, lambda) with lambda in E_tau1 and E_tau2 but not in
    E_(tau1 cap tau2), lambda in the span of tau1 cap tau2; None if there is none."""
    beta = fvec(beta)
    faces = cone_faces(cfg)
    E = {f.members: e_tau(cfg, f, beta, budget) for f in faces}
    d = cfg.d
    for f1, f2 in combinations(faces, 2):
        s1, s2 = set(f1.members), set(f2.members)
        if s1 <= s2 or s2 <= s1 or not E[f1.members] or not E[f2.members]:
            continue
        meet = _face_by_members(cfg, s1 & s2)
        meet_mod = cfg.sublattice(meet.members)
        meet_reps = {c.rep for c in E[meet.members]}
        B1 = cfg.sublattice(f1.members).basis
        B2 = cfg.sublattice(f2.members).basis
        ann = annihilator([cfg.columns[j] for j in meet.members], d) if meet.members else [
            tuple(int(i == k) for k in range(d)) for i in range(d)
        ]
        L1 = cfg.sublattice(f1.members).intersection(cfg.sublattice(f2.members))
        common = L1.restrict_to_span([cfg.columns[j] for j in meet.members]) if meet.members else Lattice.zero(d)
        group = QuotientGroup(common, meet_mod)
        for c1, c2 in product(E[f1.members], E[f2.members]):
            # lambda = c1 + B1 x1 = c2 + B2 x2, with lambda in the span of meet
            k1, k2 = len(B1), len(B2)
            rows = [[B1[a][i] for a in range(k1)] + [-B2[b][i] for b in range(k2)] for i in range(d)]
            rhs = [y - x for x, y in zip(c1.rep, c2.rep)]
            for a_row in ann:
                rows.append([dot(a_row, B1[a]) for a in range(k1)] + [0] * k2)
                rhs.append(-dot(a_row, c1.rep))
            sol = integer_solve(rows, rhs)
            if sol is None:
                continue
            lam0 = tuple(x + sum(sol[a] * B1[a][i] for a in range(k1)) for i, x in enumerate(c1.rep))
            for e in group.elements():
                lam = meet_mod.reduce(tuple(x + y for x, y in zip(lam0, group.lift(e))))
                if lam not in meet_reps:
                    return ExceptionalWitness(f1, f2, meet, lam)
    return None


@dataclass(frozen=True)
class ExceptionalResult:
    exceptional: bool
    rank: int
    volume: int
    witness: ExceptionalWitness | None

    def __bool__(self):
        return self.exceptional


def is_exceptional(cfg: Configuration, beta, budget: int = DEFAULT_BUDGET) -> ExceptionalResult:
    """Pairwise face condition, cross-checked against rank > vol(A)."""
    _require_simplex(cfg)
    wit = condition_violation(cfg, beta, budget)
    r = rank_simplex(cfg, beta, budget)
    vol = configuration_volume(cfg)
    if r < vol:
        raise InternalInconsistency(f"rank {r} below volume {vol}")
    if (wit is not None) != (r > vol):
        raise InternalInconsistency(
            f"face condition says exceptional={wit is not None} but rank {r} vs volume {vol}"
        )
    return ExceptionalResult(wit is not None, r, vol, wit)


def vertex_indices(cfg: Configuration) -> list[int]:
    return sorted(f.vertices[0] for f in cone_faces(cfg) if f.span_dim == 1)


def box_points(cfg: Configuration) -> list[tuple[int, ...]]:
    """ZA intersected with the half-open parallelepiped spanned by the vertex columns."""
    _require_simplex(cfg)
    V = vertex_indices(cfg)
    sub = cfg.sublattice(V)
    group = QuotientGroup(cfg.za, sub)
    Binv = inverse([[cfg.columns[i][r] for i in V] for r in range(cfg.d)])
    out = set()
    for e in group.elements():
        x = group.lift(e)
        coords = mat_vec(Binv, x)
        frac = [c - math.floor(c) for c in coords]
        p = cfg.combine(frac, V)
        out.add(tuple(int(t) for t in p))
    if len(out) != group.order:
        raise InternalInconsistency("box point count differs from the lattice index")
    return sorted(out, key=lambda p: (cfg.degree(p), p))


def cone_lattice_points(cfg: Configuration, lo: int, hi: int) -> list[tuple[int, ...]]:
    """Points of ZA in the cone with h-degree in [lo, hi], by degree then lexicographically."""
    V = vertex_indices(cfg)
    out = []
    for p in box_points(cfg):
        dp = cfg.degree(p)
        top = hi - dp
        if top < 0:
            continue
        for k in product(range(int(math.floor(top)) + 1), repeat=len(V)):
            deg = dp + sum(k)
            if lo <= deg <= hi:
                out.append(tuple(a + b for a, b in zip(p, cfg.combine(k, V))))
    return sorted(out, key=lambda p: (cfg.degree(p), p))


def exceptional_sweep(cfg: Configuration, window: tuple[int, int],
                      budget: int = DEFAULT_BUDGET) -> list[tuple[Fraction, ...]]:
    """Exceptional parameters among the lattice points of the cone in a degree window."""
    _require_simplex(cfg)
    lo, hi = window
    return [fvec(b) for b in cone_lattice_points(cfg, lo, hi) if is_exceptional(cfg, b, budget)]


CM = "cohen-macaulay"
NOT_CM = "not cohen-macaulay"


@dataclass(frozen=True)
class CMResult:
    verdict: str
    witness: tuple | None = None  # (beta, m1, m2), m_i indexed like the columns
    holes: tuple = ()
    apery: tuple = ()

    @property
    def is_cm(self) -> bool:
        return self.verdict == CM


def holes(cfg: Configuration, search_bound: int) -> list[tuple[int, ...]]:
    """Points of (ZA in the cone) minus NA with h-degree at most search_bound."""
    return [p for p in cone_lattice_points(cfg, 0, search_bound) if not semigroup_member(cfg, p)]


def apery_set(cfg: Configuration) -> list[tuple[int, ...]]:
    """Elements s of NA with s - a_i outside NA for every vertex i.

    These are the monomial generators of k[NA] as a module over the
    polynomial ring on the vertex variables.  A non-vertex column j enters
    at most c_j - 1 times, c_j being the least c with c a_j in Z a_V.
    """
    _require_simplex(cfg)
    V = vertex_indices(cfg)
    sub = cfg.sublattice(V)
    rest = [j for j in range(cfg.n) if j not in V]
    caps = []
    for j in rest:
        c = 1
        while tuple(c * x for x in cfg.columns[j]) not in sub:
            c += 1
        caps.append(c)
    out = set()
    for k in product(*(range(c) for c in caps)):
        s = cfg.combine(k, rest)
        if s in out:
            continue
        if not any(semigroup_member(cfg, [a - b for a, b in zip(s, cfg.columns[i])]) for i in V):
            out.add(s)
    return sorted(out, key=lambda p: (cfg.degree(p), p))


def _cm_witness(cfg: Configuration, V, found, search_bound: int):
    for x in found:
        hits = []
        for i in V:
            for s in range(1, search_bound + 1):
                if semigroup_member(cfg, [a + s * b for a, b in zip(x, cfg.columns[i])]):
                    hits.append((i, s))
                    break
        if len(hits) >= 2:
            (i, s), (j, t) = hits[:2]
            m1 = tuple(s if k == i else 0 for k in range(cfg.n))
            m2 = tuple(t if k == j else 0 for k in range(cfg.n))
            return (x, m1, m2)
    return None


def is_cohen_macaulay(cfg: Configuration, search_bound: int = 8) -> CMResult:
    """Cohen-Macaulayness of k[NA] for a simplex configuration.

    The verdict is exact: k[NA] is free over the polynomial ring on the
    vertex variables iff its Apery set has [ZA : Z a_V] elements.  A witness
    (hole beta with beta + s a_i and beta + t a_j in NA, i != j vertices) is
    searched for among holes up to ``search_bound``, independently of the
    count; finding one for a Cohen-Macaulay ring is an inconsistency.
    """
    _require_simplex(cfg)
    V = vertex_indices(cfg)
    ap = apery_set(cfg)
    free = len(ap) == lattice_index(cfg.sublattice(V), cfg.za)
    found = holes(cfg, search_bound)
    witness = _cm_witness(cfg, V, found, search_bound)
    if free and witness is not None:
        raise InternalInconsistency(f"free over the vertex ring but hole witness {witness}")
    return CMResult(CM if free else NOT_CM, witness, tuple(found), tuple(ap))
