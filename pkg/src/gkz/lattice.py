"""Exact integer/rational linear algebra: normal forms, lattices, quotients.

Vectors are tuples, matrices are lists of rows.  Integer data stays ``int``,
everything rational is a ``fractions.Fraction``; no floating point is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import NotSublattice

INFINITE = math.inf

Vector = tuple
Matrix = list


# ---------------------------------------------------------------------------
# rational linear algebra
# ---------------------------------------------------------------------------

def fvec(v: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), 0)


def mat_vec(M: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in M)


def vec_mat(v: Sequence, M: Sequence[Sequence]) -> tuple:
    if not M:
        return ()
    return tuple(sum((v[i] * M[i][j] for i in range(len(M))), 0) for j in range(len(M[0])))


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    cols = list(zip(*B))
    return [[dot(row, col) for col in cols] for row in A]


def transpose(M: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    if not M:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*M)]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def rref(M: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over Q and the list of pivot columns."""
    R = [[Fraction(x) for x in row] for row in M]
    if not R:
        return R, []
    m, n = len(R), len(R[0])
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(m):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return R, pivots


def rank(M: Sequence[Sequence]) -> int:
    return len(rref(M)[1])


def nullspace(M: Sequence[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of {x : M x = 0} over Q."""
    if not M:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    R, pivots = rref(M)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(R, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(M: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """One rational solution of M x = b, or None if inconsistent."""
    m = len(M)
    ncols = len(M[0]) if M else 0
    if m == 0:
        return tuple(Fraction(0) for _ in range(ncols))
    aug = [list(row) + [bi] for row, bi in zip(M, b)]
    R, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(R, pivots):
        x[p] = row[ncols]
    return tuple(x)


def inverse(M: Sequence[Sequence]) -> Matrix:
    n = len(M)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(M)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def determinant(M: Sequence[Sequence]) -> Fraction:
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            if f:
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return det


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to a primitive integer vector."""
    fr = fvec(v)
    den = reduce(math.lcm, (x.denominator for x in fr), 1)
    ints = [int(x * den) for x in fr]
    g = reduce(math.gcd, ints, 0)
    return tuple(x // g for x in ints) if g else tuple(ints)


def annihilator(vectors: Sequence[Sequence], dim: int) -> list[tuple[int, ...]]:
    """Integer covectors c with c.v = 0 for every given vector (a Q-basis)."""
    return [primitive(c) for c in nullspace([list(v) for v in vectors], dim)]


def is_integral(v: Iterable) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


# ---------------------------------------------------------------------------
# integer normal forms
# ---------------------------------------------------------------------------

def hnf(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row Hermite normal form of an integer matrix, zero rows removed.

    The result is the canonical basis of the row lattice: echelon form with
    positive pivots and entries above each pivot reduced into [0, pivot).
    """
    A = [[int(x) for x in row] for row in rows if any(row)]
    if not A:
        return []
    m, n = len(A), len(A[0])
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[p] = A[p], A[r]
            done = True
            for i in range(r + 1, m):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                    if A[i][c]:
                        done = False
            if done:
                break
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
        r += 1
    return [row for row in A[:r]]


def smith_normal_form(M: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``U @ M @ V == S`` with unimodular U, V.

    S is diagonal with nonnegative entries s_1 | s_2 | ... (zeros last).
    """
    m = len(M)
    n = len(M[0]) if m else 0
    S = [[int(x) for x in row] for row in M]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        S[dst] = [x - q * y for x, y in zip(S[dst], S[src])]
        U[dst] = [x - q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in S:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            p = S[t][t]
            clean = True
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, S[i][t] // p)
                    clean = clean and S[i][t] == 0
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, S[t][j] // p)
                    clean = clean and S[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p), None
            )
            if bad is None:
                break
            # fold the offending row into the pivot row and retry
            add_row(t, bad, -1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
    return U, S, V


def integer_kernel(M: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """HNF basis of {x in Z^ncols : M x = 0}."""
    if not M:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    _, S, V = smith_normal_form(M)
    r = sum(1 for i in range(min(len(S), ncols)) if S[i][i])
    cols = [tuple(V[i][k] for i in range(ncols)) for k in range(r, ncols)]
    return [tuple(row) for row in hnf(cols)]


def integer_solve(M: Sequence[Sequence[int]], b: Sequence) -> tuple[int, ...] | None:
    """One integer solution of M x = b (b may be rational), or None."""
    m = len(M)
    ncols = len(M[0]) if m else 0
    if m == 0:
        return tuple(0 for _ in range(ncols))
    U, S, V = smith_normal_form(M)
    ub = mat_vec(U, fvec(b))
    y = [0] * ncols
    for i in range(m):
        s = S[i][i] if i < ncols else 0
        if s == 0:
            if ub[i] != 0:
                return None
            continue
        q = Fraction(ub[i]) / s
        if q.denominator != 1:
            return None
        y[i] = int(q)
    return tuple(int(x) for x in mat_vec(V, y))


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lattice:
    """A subgroup of Z^dim given by its HNF basis (rows).

    The empty basis is the zero lattice.  Because the basis is canonical,
    two lattices are equal iff their dataclass fields are equal.
    """

    dim: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def span(cls, dim: int, generators: Iterable[Sequence]) -> "Lattice":
        gens = [list(g) for g in generators]
        for g in gens:
            if len(g) != dim or not is_integral(g):
                raise ValueError(f"generator {g} is not an integer vector of length {dim}")
        return cls(dim, tuple(tuple(r) for r in hnf([[int(x) for x in g] for g in gens])))

    @classmethod
    def zero(cls, dim: int) -> "Lattice":
        return cls(dim, ())

    @classmethod
    def standard(cls, dim: int) -> "Lattice":
        return cls(dim, tuple(tuple(identity(dim)[i]) for i in range(dim)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def _pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.basis)

    @cached_property
    def _frame_inverse(self) -> Matrix:
        # basis rows followed by unit vectors completing them to a Q-basis
        frame = [list(r) for r in self.basis]
        frame += [identity(self.dim)[c] for c in range(self.dim) if c not in self._pivots]
        return inverse(frame)

    def frame_coordinates(self, v: Sequence) -> tuple[Fraction, ...]:
        return vec_mat(fvec(v), self._frame_inverse)

    def coordinates(self, v: Sequence) -> tuple[Fraction, ...] | None:
        """Rational coordinates of v in the basis, or None if v is off the span."""
        if len(v) != self.dim:
            raise ValueError("dimension mismatch")
        if self.dim == 0:
            return ()
        c = self.frame_coordinates(v)
        if any(c[self.rank:]):
            return None
        return c[: self.rank]

    def in_span(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def __contains__(self, v: Sequence) -> bool:
        c = self.coordinates(v)
        return c is not None and is_integral(c)

    @cached_property
    def _scaled_frame(self) -> tuple[int, Matrix]:
        inv = self._frame_inverse
        D = math.lcm(*(x.denominator for row in inv for x in row))
        return D, [[int(x * D) for x in row] for row in inv]

    def reduce(self, v: Sequence) -> tuple[Fraction, ...]:
        """Canonical representative of the coset v + self (v any rational vector).

        Frame coordinates along the basis are floored; done in integers.
        """
        if self.dim == 0:
            return ()
        if not self.basis:
            return fvec(v)
        q = math.lcm(*(x.denominator for x in v))
        V = [int(x * q) for x in v]
        D, M = self._scaled_frame
        qD = q * D
        rng = range(self.dim)
        shift = [sum(V[j] * M[j][k] for j in rng) // qD for k in range(self.rank)]
        if not any(shift):
            return tuple(V) if q == 1 else fvec(v)
        if q == 1:
            return tuple(V[j] - sum(s * row[j] for s, row in zip(shift, self.basis)) for j in rng)
        return tuple(
            Fraction(V[j] - q * sum(s * row[j] for s, row in zip(shift, self.basis)), q) for j in rng
        )

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(b in self for b in other.basis)

    def __add__(self, other: "Lattice") -> "Lattice":
        return Lattice.span(self.dim, list(self.basis) + list(other.basis))

    def intersection(self, other: "Lattice") -> "Lattice":
        if not self.basis or not other.basis:
            return Lattice.zero(self.dim)
        k1 = self.rank
        # c1 B1 - c2 B2 = 0
        M = [
            [self.basis[i][j] for i in range(k1)] + [-other.basis[i][j] for i in range(other.rank)]
            for j in range(self.dim)
        ]
        kern = integer_kernel(M, k1 + other.rank)
        return Lattice.span(self.dim, [vec_mat(k[:k1], self.basis) for k in kern])

    def restrict_to_span(self, vectors: Sequence[Sequence]) -> "Lattice":
        """self intersected with the rational span of the given vectors."""
        ann = annihilator(vectors, self.dim) if vectors else [tuple(r) for r in identity(self.dim)]
        if not ann or not self.basis:
            return self
        M = [[dot(c, b) for b in self.basis] for c in ann]
        kern = integer_kernel(M, self.rank)
        return Lattice.span(self.dim, [vec_mat(k, self.basis) for k in kern])


def member(v: Sequence, L: Lattice) -> bool:
    return v in L


def lattice_index(sub: Lattice, sup: Lattice):
    """Group index [sup : sub]; INFINITE when the ranks differ."""
    if not sup.contains_lattice(sub):
        raise NotSublattice("sub is not contained in super")
    if sub.rank != sup.rank:
        return INFINITE
    if sub.rank == 0:
        return 1
    C = [sup.coordinates(b) for b in sub.basis]
    return abs(int(determinant(C)))


class QuotientGroup:
    """The finitely generated abelian group sup / sub.

    ``invariant_factors`` lists s_1 | s_2 | ... followed by zeros for the free
    part.  Classes are tuples of residues, with 0 as the identity.
    """

    def __init__(self, sup: Lattice, sub: Lattice):
        if not sup.contains_lattice(sub):
            raise NotSublattice("sub is not contained in super")
        self.sup, self.sub = sup, sub
        r = sup.rank
        C = [[int(x) for x in sup.coordinates(b)] for b in sub.basis]
        if C:
            _, S, V = smith_normal_form(C)
            factors = [S[i][i] for i in range(len(C))]
        else:
            V, factors = identity(r), []
        self.invariant_factors = tuple(factors + [0] * (r - len(factors)))
        self._V = V
        self._Vinv = [[int(x) for x in row] for row in inverse(V)] if r else []

    @property
    def order(self):
        if any(s == 0 for s in self.invariant_factors):
            return INFINITE
        return math.prod(self.invariant_factors)

    def class_of(self, x: Sequence) -> tuple[int, ...]:
        c = self.sup.coordinates(x)
        if c is None or not is_integral(c):
            raise ValueError(f"{x} is not in the ambient lattice")
        y = vec_mat([int(t) for t in c], self._V)
        return tuple(int(t) % s if s else int(t) for t, s in zip(y, self.invariant_factors))

    def lift(self, e: Sequence[int]) -> tuple[int, ...]:
        c = vec_mat(list(e), self._Vinv)
        return tuple(int(x) for x in vec_mat(c, self.sup.basis)) if c else (0,) * self.sup.dim

    def elements(self) -> Iterator[tuple[int, ...]]:
        if self.order == INFINITE:
            raise ValueError("infinite quotient")
        yield from product(*(range(s) for s in self.invariant_factors))

    def __len__(self) -> int:
        if self.order == INFINITE:
            raise ValueError("infinite quotient")
        return int(self.order)
