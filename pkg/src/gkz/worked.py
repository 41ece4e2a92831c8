"""Two reference computations rerun by ``gkz verify``.

SMALL is the 2x3 configuration with two different regular triangulations,
RANK11 the 3x9 simplicial configuration whose parameter (1,1,1) has rank 11.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .formulas import (
    exceptional_sweep,
    is_cohen_macaulay,
    is_exceptional,
    rank_breakdown,
    single_cell_triangulation,
    dim_log_free,
)
from .geometry import cone_faces, configuration_volume, make_configuration, normalized_volume
from .params import fingerprint, minface
from .series import minex, phi_series, verify_annihilation

SMALL_A = [[1, 1, 1], [0, 1, 2]]
SMALL_BETA = (1, 1)
SMALL_W = (0, 1, 0)  # one cell {1,3}
SMALL_W2 = (0, -1, 0)  # cells {1,2}, {2,3}

RANK11_A = [
    [1, 1, 1, 1, 1, 1, 1, 1, 1],
    [0, 1, 2, 3, 0, 2, 0, 1, 0],
    [0, 0, 0, 0, 1, 1, 2, 2, 3],
]
RANK11_BETA = (1, 1, 1)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


def _half(*xs):
    return tuple(Fraction(x) for x in xs)


def small_example_checks() -> list[Check]:
    cfg = make_configuration(SMALL_A)
    out = []
    b1 = dim_log_free(cfg, SMALL_BETA, SMALL_W)
    b2 = dim_log_free(cfg, SMALL_BETA, SMALL_W2)
    vals1 = sorted((c.volume, c.value) for c in b1.contributions)
    vals2 = sorted((c.volume, c.value) for c in b2.contributions)
    out.append(Check("small: dimension for one-cell weight is 2", b1.total == 2, b1.formula()))
    out.append(Check("small: breakdown (2-2+1)+2(1-1)+1",
                     vals1 == [(1, 0), (1, 0), (1, 1), (2, 1)]
                     and sorted(c.formula() for c in b1.contributions) == ["1", "1-1", "1-1", "2-1-1+1"],
                     b1.formula()))
    out.append(Check("small: dimension for two-cell weight is 1", b2.total == 1, b2.formula()))
    out.append(Check("small: breakdown 2(1-2+1)+3(1-1)+1",
                     vals2 == [(1, 0)] * 5 + [(1, 1)]
                     and sorted(c.formula() for c in b2.contributions)
                     == ["1", "1-1", "1-1", "1-1", "1-1-1+1", "1-1-1+1"],
                     b2.formula()))
    m1 = {e.v for e in minex(cfg, SMALL_BETA, SMALL_W)}
    m2 = {e.v for e in minex(cfg, SMALL_BETA, SMALL_W2)}
    out.append(Check("small: exponents {(0,1,0),(1/2,0,1/2)} / {(0,1,0)}",
                     m1 == {_half(0, 1, 0), _half(Fraction(1, 2), 0, Fraction(1, 2))}
                     and m2 == {_half(0, 1, 0)}))
    poly = phi_series(cfg, (0, 1, 0), SMALL_W, 10)
    out.append(Check("small: phi_(0,1,0) = x2", poly.terms == (((0, 0, 0), Fraction(1)),)))
    s = phi_series(cfg, (Fraction(1, 2), 0, Fraction(1, 2)), SMALL_W, 10)
    out.append(Check("small: coefficient at (-1,2,-1) is 1/8", s.coefficient((-1, 2, -1)) == Fraction(1, 8)))
    out.append(Check("small: series annihilated", verify_annihilation(s, cfg, SMALL_BETA, 4).ok))
    return out


def rank11_checks(sweep_window=(0, 6)) -> list[Check]:
    cfg = make_configuration(RANK11_A)
    out = []
    vol = configuration_volume(cfg)
    out.append(Check("rank11: vol(A) = 9", vol == 9, str(vol)))
    vols = sorted((normalized_volume(cfg, f) for f in cone_faces(cfg)), reverse=True)
    out.append(Check("rank11: face volumes 9/3/3/3/1/1/1/1", vols == [9, 3, 3, 3, 1, 1, 1, 1], str(vols)))
    mf = sorted(f.vertices for f in minface(cfg, RANK11_BETA))
    out.append(Check("rank11: minface = {t1, t4, t9}", mf == [(0,), (3,), (8,)], str(mf)))
    b = rank_breakdown(cfg, RANK11_BETA)
    by_dim = b.by_dimension()
    out.append(Check("rank11: rank 11 = 2 + 6 + 3",
                     b.total == 11 and by_dim.get(3) == 2 and by_dim.get(2) == 6 and by_dim.get(1) == 3,
                     b.formula()))
    T = single_cell_triangulation(cfg)
    out.append(Check("rank11: 11 exponents", len(minex(cfg, RANK11_BETA, T)) == 11))
    ex = is_exceptional(cfg, RANK11_BETA)
    out.append(Check("rank11: beta0 exceptional", ex.exceptional))
    out.append(Check("rank11: a1 not exceptional", not is_exceptional(cfg, cfg.columns[0]).exceptional))
    sweep = exceptional_sweep(cfg, sweep_window)
    out.append(Check(f"rank11: sweep over degrees {list(sweep_window)} is [beta0]",
                     sweep == [tuple(Fraction(x) for x in RANK11_BETA)], str(sweep)))
    cm = is_cohen_macaulay(cfg, 6)
    out.append(Check("rank11: not Cohen-Macaulay, with witness",
                     cm.is_cm is False and cm.witness is not None, str(cm.witness)))
    f0, f1 = fingerprint(cfg, RANK11_BETA), fingerprint(cfg, cfg.columns[0])
    out.append(Check("rank11: fingerprints of beta0 and a1 differ at the empty face",
                     f0 != f1 and [f.members for f in f0.differences(f1)] == [()]))
    return out


def all_checks() -> list[Check]:
    return small_example_checks() + rank11_checks()
