"""The finite sets E_tau(beta), their natural maps, minface and fingerprints."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import SpanMismatch
from .geometry import CONE, Configuration, Face, cone_faces
from .lattice import Lattice, fvec
from .monoid import DEFAULT_BUDGET, Reach, semigroup_member, shifted_classes

__all__ = [
    "EClass",
    "Fingerprint",
    "e_tau",
    "e_tau_witnessed",
    "natural_map",
    "minface",
    "fingerprint",
    "semigroup_member",
]


def fmt(x) -> str:
    return str(Fraction(x))


@dataclass(frozen=True)
class EClass:
    """An element of C(A cap tau)/Z(A cap tau), stored by its canonical representative."""

    face: Face
    rep: tuple[Fraction, ...]
    modulus: Lattice = field(compare=False, repr=False)

    def __str__(self):
        return f"[{', '.join(fmt(x) for x in self.rep)}] mod Z(A cap {self.face.label()})"

    def same_class(self, vector: Sequence) -> bool:
        return self.modulus.reduce(vector) == self.rep


def parameter(beta: Iterable) -> tuple[Fraction, ...]:
    return fvec(beta)


def e_tau_witnessed(cfg: Configuration, tau: Face, beta,
                    budget: int = DEFAULT_BUDGET) -> list[tuple[EClass, Reach]]:
    """E_tau(beta) with, for each class, y in N^n (zero on tau) realising it.

    The witness satisfies  beta - A y  ==  rep  (mod Z(A cap tau)).
    """
    beta = parameter(beta)
    if len(beta) != cfg.d:
        raise ValueError(f"beta has length {len(beta)}, expected {cfg.d}")
    modulus = cfg.sublattice(tau.members)
    reach = shifted_classes(cfg, tuple(tau.members), beta, budget)
    return sorted(
        ((EClass(tau, r.rep, modulus), r) for r in reach.values()),
        key=lambda pair: pair[0].rep,
    )


def e_tau(cfg: Configuration, tau: Face, beta, budget: int = DEFAULT_BUDGET) -> list[EClass]:
    """E_tau(beta) = { lambda : beta - lambda in NA + Z(A cap tau) }, canonically sorted."""
    return [c for c, _ in e_tau_witnessed(cfg, tau, beta, budget)]


def natural_map(cfg: Configuration, lam: EClass, tau: Face) -> EClass:
    """Reinterpret a class on a smaller-span face modulo Z(A cap tau)."""
    src = lam.face.members
    if cfg.span_rank(tuple(set(src) | set(tau.members))) != cfg.span_rank(tau.members):
        raise SpanMismatch(f"span of {lam.face.label()} is not inside span of {tau.label()}")
    modulus = cfg.sublattice(tau.members)
    return EClass(tau, modulus.reduce(lam.rep), modulus)


def lifts_to(cfg: Configuration, lam: EClass, facet: Face, beta,
             budget: int = DEFAULT_BUDGET) -> bool:
    """Whether some class of E_facet(beta) maps onto lam."""
    return any(natural_map(cfg, c, lam.face) == lam for c in e_tau(cfg, facet, beta, budget))


def minface(cfg: Configuration, beta, budget: int = DEFAULT_BUDGET) -> list[Face]:
    nonempty = [f for f in cone_faces(cfg) if e_tau(cfg, f, beta, budget)]
    return [
        f for f in nonempty
        if not any(g is not f and set(g.members) < set(f.members) for g in nonempty)
    ]


class Fingerprint:
    """The map tau -> E_tau(beta) over all cone faces."""

    def __init__(self, cfg: Configuration, beta, budget: int = DEFAULT_BUDGET):
        self.beta = parameter(beta)
        self.faces = cone_faces(cfg)
        self.classes = {f.members: frozenset(c.rep for c in e_tau(cfg, f, beta, budget))
                        for f in self.faces}

    def __eq__(self, other):
        return isinstance(other, Fingerprint) and self.classes == other.classes

    def __hash__(self):
        return hash(frozenset(self.classes.items()))

    def differences(self, other: "Fingerprint") -> list[Face]:
        return [f for f in self.faces if self.classes[f.members] != other.classes.get(f.members)]


def fingerprint(cfg: Configuration, beta, budget: int = DEFAULT_BUDGET) -> Fingerprint:
    return Fingerprint(cfg, beta, budget)


def is_cone_face(face: Face) -> bool:
    return face.kind == CONE
