"""Point-configuration geometry: homogeneity, cone faces, regular triangulations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Sequence

from .errors import NonGenericWeight, NotHomogeneous, RankDeficient
from .lattice import (
    Lattice,
    dot,
    fvec,
    inverse,
    lattice_index,
    nullspace,
    primitive,
    rank,
    solve,
    transpose,
    vec_mat,
)

TRIANGULATION = "triangulation"
CONE = "cone"


@dataclass(frozen=True)
class Configuration:
    """A d x n integer matrix whose columns lie on a hyperplane h.x = 1."""

    A: tuple[tuple[int, ...], ...]
    h: tuple[Fraction, ...]

    @property
    def d(self) -> int:
        return len(self.A)

    @property
    def n(self) -> int:
        return len(self.A[0])

    @cached_property
    def columns(self) -> tuple[tuple[int, ...], ...]:
        return tuple(zip(*self.A))

    @cached_property
    def za(self) -> Lattice:
        return Lattice.span(self.d, self.columns)

    def col(self, j: int) -> tuple[int, ...]:
        return self.columns[j]

    def combine(self, coeffs: Sequence, indices: Sequence[int] | None = None) -> tuple:
        """sum_j coeffs[j] * a_j (over ``indices`` if given)."""
        idx = range(self.n) if indices is None else indices
        coeffs = list(coeffs)
        out = [0] * self.d
        for k, j in enumerate(idx):
            c = coeffs[k] if indices is not None else coeffs[j]
            if c:
                a = self.columns[j]
                for i in range(self.d):
                    out[i] += c * a[i]
        return tuple(out)

    def degree(self, x: Sequence) -> Fraction:
        """The grading h.x; equals the total multiplicity of any N-combination."""
        return dot(self.h, fvec(x))

    def sublattice(self, indices) -> Lattice:
        return Lattice.span(self.d, [self.columns[j] for j in indices])

    def span_rank(self, indices) -> int:
        return rank([self.columns[j] for j in indices]) if indices else 0


def make_configuration(A: Sequence[Sequence[int]]) -> Configuration:
    rows = [list(r) for r in A]
    if not rows or not rows[0]:
        raise ValueError("empty matrix")
    if any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged matrix")
    for r in rows:
        for x in r:
            if Fraction(x).denominator != 1:
                raise ValueError(f"non-integer entry {x}")
    rows = [[int(x) for x in r] for r in rows]
    d, n = len(rows), len(rows[0])
    cols = transpose(rows)
    h = solve(cols, [1] * n)
    if h is None:
        raise NotHomogeneous("columns do not lie on a common hyperplane off the origin")
    if rank(rows) < d:
        raise RankDeficient(f"rank(A) = {rank(rows)} < d = {d}")
    return Configuration(tuple(tuple(r) for r in rows), h)


@dataclass(frozen=True)
class Face:
    """A face of a triangulation or of the cone over A.

    ``members`` are all column indices j with a_j in the face; ``vertices``
    are the simplex vertices (triangulation faces) or extreme rays (cone
    faces).  Indices are 0-based.
    """

    members: tuple[int, ...]
    vertices: tuple[int, ...]
    kind: str
    span_dim: int

    @property
    def is_empty(self) -> bool:
        return not self.members

    def label(self) -> str:
        return "{" + ",".join(str(j + 1) for j in self.vertices) + "}"

    def sort_key(self):
        return (self.span_dim, self.vertices, self.members)


def empty_face(kind: str) -> Face:
    return Face((), (), kind, 0)


class Weight:
    """A weight vector w, optionally with a symbolic lexicographic tie-breaker.

    With ``perturb`` the weight is w + eps*e_1 + eps^2*e_2 + ... for an
    infinitesimal eps, so comparisons of w.u become lexicographic on
    (w.u, u_1, ..., u_n).
    """

    def __init__(self, values: Sequence, perturb: bool = False):
        self.values = fvec(values)
        self.perturb = perturb

    def __len__(self):
        return len(self.values)

    def __repr__(self):
        return f"Weight({[str(x) for x in self.values]}, perturb={self.perturb})"

    def __eq__(self, other):
        return isinstance(other, Weight) and (self.values, self.perturb) == (other.values, other.perturb)

    def __hash__(self):
        return hash((self.values, self.perturb))

    def of(self, u: Sequence) -> Fraction:
        return dot(self.values, u)

    def key(self, u: Sequence) -> tuple:
        if self.perturb:
            return (self.of(u),) + tuple(u)
        return (self.of(u),)

    def heights(self) -> list[tuple[Fraction, ...]]:
        n = len(self.values)
        if not self.perturb:
            return [(x,) for x in self.values]
        return [(x,) + tuple(Fraction(int(i == j)) for i in range(n)) for j, x in enumerate(self.values)]


def as_weight(w) -> Weight:
    return w if isinstance(w, Weight) else Weight(w)


def _lex_sign(vec) -> int:
    for x in vec:
        if x:
            return 1 if x > 0 else -1
    return 0


@dataclass(frozen=True)
class Triangulation:
    weight: Weight
    cells: tuple[Face, ...]
    faces: tuple[Face, ...]
    # cell vertices -> covector c with c.a_i = w_i on the cell (unperturbed heights)
    covectors: dict = field(compare=False, hash=False)

    def face(self, vertices) -> Face:
        key = tuple(sorted(vertices))
        for f in self.faces:
            if f.vertices == key:
                return f
        raise KeyError(f"no face with vertices {key}")

    def cell_containing(self, indices) -> Face:
        s = set(indices)
        for c in self.cells:
            if s <= set(c.vertices):
                return c
        raise KeyError(f"{sorted(s)} is not a face of the triangulation")

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(j for c in self.cells for j in c.vertices)


class _Lifting:
    """Certificate tests for lower faces of the lifted configuration."""

    def __init__(self, cfg: Configuration, w: Weight):
        if len(w) != cfg.n:
            raise ValueError(f"weight has length {len(w)}, expected {cfg.n}")
        self.cfg = cfg
        self.w = w
        self.H = w.heights()

    def certificate(self, I: tuple[int, ...]):
        """Classify the d-subset I: None (not a lower cell) or the residual vectors.

        Raises NonGenericWeight when I spans a lower face containing another
        lifted point.
        """
        cfg = self.cfg
        B = [list(cfg.columns[i]) for i in I]  # rows a_i
        if rank(B) < cfg.d:
            return None
        Binv = inverse(transpose(B))  # (A_I)^{-1}, A_I has columns a_i
        comps = len(self.H[0])
        # c (per height component) solves c . a_i = H_i
        C = [vec_mat([self.H[i][k] for i in I], Binv) for k in range(comps)]
        residual = {}
        for j in range(cfg.n):
            if j in I:
                continue
            r = tuple(self.H[j][k] - dot(C[k], cfg.columns[j]) for k in range(comps))
            s = _lex_sign(r)
            if s < 0:
                return None
            if s == 0:
                raise NonGenericWeight(
                    f"lifted point {j + 1} lies on the lower face spanned by {[i + 1 for i in I]}"
                )
            residual[j] = r
        return C[0], residual


def _cell_face(cfg: Configuration, I: tuple[int, ...]) -> Face:
    Binv = inverse([[cfg.columns[i][r] for i in I] for r in range(cfg.d)])
    members = []
    for j in range(cfg.n):
        x = [dot(row, cfg.columns[j]) for row in Binv]
        if all(t >= 0 for t in x):
            members.append(j)
    return Face(tuple(members), tuple(sorted(I)), TRIANGULATION, cfg.d)


def _subface(cfg: Configuration, cell: Face, J: tuple[int, ...]) -> Face:
    I = cell.vertices
    Binv = inverse([[cfg.columns[i][r] for i in I] for r in range(cfg.d)])
    keep = set(J)
    members = []
    for j in cell.members:
        x = [dot(row, cfg.columns[j]) for row in Binv]
        if all(t == 0 for t, i in zip(x, I) if i not in keep):
            members.append(j)
    return Face(tuple(members), tuple(sorted(J)), TRIANGULATION, len(J))


def _assemble(cfg: Configuration, w: Weight, cells: dict) -> Triangulation:
    cell_faces = tuple(sorted((_cell_face(cfg, I) for I in cells), key=Face.sort_key))
    covered = {j for c in cell_faces for j in c.members}
    if covered != set(range(cfg.n)):
        raise NonGenericWeight(f"points {sorted(set(range(cfg.n)) - covered)} not covered")
    faces = {}
    for c in cell_faces:
        for k in range(cfg.d + 1):
            for J in combinations(c.vertices, k):
                if J not in faces:
                    faces[J] = _subface(cfg, c, J) if k else empty_face(TRIANGULATION)
    return Triangulation(
        w,
        cell_faces,
        tuple(sorted(faces.values(), key=Face.sort_key)),
        {tuple(sorted(I)): cov for I, cov in cells.items()},
    )


def regular_triangulation(cfg: Configuration, w, perturb: bool = False) -> Triangulation:
    """Regular triangulation of conv(A) induced by lifting a_j to height w_j.

    Cells are found by walking across interior ridges starting from one
    lower cell.  ``perturb`` adds the lexicographic tie-breaker.
    """
    w = as_weight(w) if not perturb else Weight(as_weight(w).values, True)
    return _walk_triangulation(cfg, w)


@lru_cache(maxsize=512)
def _walk_triangulation(cfg: Configuration, w: Weight) -> Triangulation:
    lift = _Lifting(cfg, w)
    d = cfg.d
    start = None
    for I in combinations(range(cfg.n), d):
        cert = lift.certificate(I)
        if cert is not None:
            start = (I, cert)
            break
    if start is None:
        raise NonGenericWeight("no lower cell found")
    cells = {start[0]: start[1][0]}
    queue = [start[0]]
    while queue:
        I = queue.pop()
        for drop in I:
            ridge = tuple(i for i in I if i != drop)
            if d == 1:
                continue
            normal = nullspace([list(cfg.columns[i]) for i in ridge], d)
            if len(normal) != 1:
                continue
            nv = normal[0]
            side = dot(nv, cfg.columns[drop])
            others = [k for k in range(cfg.n) if dot(nv, cfg.columns[k]) * side < 0]
            if not others:
                continue  # boundary ridge
            found = []
            for k in others:
                J = tuple(sorted(ridge + (k,)))
                if J in cells:
                    found.append(J)
                    continue
                cert = lift.certificate(J)
                if cert is not None:
                    found.append(J)
                    cells[J] = cert[0]
                    queue.append(J)
            if len(found) != 1:
                raise NonGenericWeight(
                    f"ridge {[i + 1 for i in ridge]} has {len(found)} neighbouring cells"
                )
    return _assemble(cfg, w, cells)


def is_generic_weight(cfg: Configuration, w) -> bool:
    try:
        regular_triangulation(cfg, w)
    except NonGenericWeight:
        return False
    return True


def facets(tau: Face, T: Triangulation) -> list[Face]:
    """Codimension-one faces of a triangulation face."""
    if not tau.vertices:
        return []
    return [T.face(tuple(v for v in tau.vertices if v != drop)) for drop in tau.vertices]


def intersect_faces(faces: Sequence[Face], T: Triangulation) -> Face:
    common = set(faces[0].vertices)
    for f in faces[1:]:
        common &= set(f.vertices)
    return T.face(tuple(sorted(common)))


def normalized_volume(cfg: Configuration, tau: Face) -> int:
    """The index [Z(A cap tau) : sum over vertices of Z a_i]; 1 for the empty face."""
    if not tau.members:
        return 1
    if cfg.span_rank(tau.vertices) != len(tau.vertices):
        raise ValueError(f"vertices of {tau.label()} are not linearly independent")
    return int(lattice_index(cfg.sublattice(tau.vertices), cfg.sublattice(tau.members)))


@lru_cache(maxsize=128)
def cone_faces(cfg: Configuration) -> tuple[Face, ...]:
    """All faces of the cone Q>=0 A, from {0} to the full cone."""
    d, n = cfg.d, cfg.n
    facet_sets = set()
    if d == 1:
        facet_sets.add(frozenset())
    else:
        for S in combinations(range(n), d - 1):
            rows = [list(cfg.columns[i]) for i in S]
            ns = nullspace(rows, d)
            if len(ns) != 1:
                continue
            c = primitive(ns[0])
            vals = [dot(c, a) for a in cfg.columns]
            if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
                facet_sets.add(frozenset(j for j, v in enumerate(vals) if v == 0))
    member_sets = {frozenset(range(n))}
    frontier = set(facet_sets)
    while frontier:
        member_sets |= frontier
        frontier = {a & b for a in member_sets for b in facet_sets} - member_sets
    ranks = {m: cfg.span_rank(sorted(m)) for m in member_sets}
    rays = {}
    for m, r in ranks.items():
        if r == 1:
            rays[m] = min(m)
    faces = []
    for m, r in ranks.items():
        verts = tuple(sorted(v for ray, v in rays.items() if ray <= m))
        faces.append(Face(tuple(sorted(m)), verts, CONE, r))
    return tuple(sorted(faces, key=Face.sort_key))


def is_simplex(cfg: Configuration) -> bool:
    return sum(1 for f in cone_faces(cfg) if f.span_dim == 1) == cfg.d


def configuration_volume(cfg: Configuration) -> int:
    """Normalized volume of conv(A) with respect to the lattice ZA."""
    T = regular_triangulation(cfg, [0] * cfg.n, perturb=True)
    return sum(int(lattice_index(cfg.sublattice(c.vertices), cfg.za)) for c in T.cells)


def single_cell_weight(cfg: Configuration) -> Weight:
    """For a simplex configuration: a weight whose triangulation is conv(A) itself.

    Vertex columns get height 0 and all other columns height 1, with the
    lexicographic tie-breaker so that integer programs have unique optima.
    """
    verts = {f.vertices[0] for f in cone_faces(cfg) if f.span_dim == 1}
    return Weight([0 if j in verts else 1 for j in range(cfg.n)], perturb=True)
