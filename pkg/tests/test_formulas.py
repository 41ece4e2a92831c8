from __future__ import annotations

import random
from fractions import Fraction

import pytest

from corpus import BETA0, COVERAGE_CASES, RANK11, SMALL, UNIMODULAR, random_corpus
from gkz.errors import NotSimplex
from gkz.formulas import (
    CM,
    NOT_CM,
    apery_set,
    box_points,
    cone_lattice_points,
    dim_log_free,
    exceptional_sweep,
    holes,
    is_cohen_macaulay,
    is_exceptional,
    rank_breakdown,
    rank_simplex,
)
from gkz.geometry import configuration_volume, make_configuration
from gkz.monoid import semigroup_member

F = Fraction
SQUARE = [[1, 1, 1, 1], [0, 1, 0, 1], [0, 0, 1, 1]]


def formulas(b):
    return sorted(c.formula() for c in b.contributions)


def test_small_example_breakdowns():
    cfg = make_configuration(SMALL)
    b = dim_log_free(cfg, (1, 1), (0, 1, 0))
    assert b.total == 2
    assert formulas(b) == ["1", "1-1", "1-1", "2-1-1+1"]
    b2 = dim_log_free(cfg, (1, 1), (0, -1, 0))
    assert b2.total == 1
    assert formulas(b2) == ["1", "1-1", "1-1", "1-1", "1-1-1+1", "1-1-1+1"]


def test_rank11_breakdown():
    cfg = make_configuration(RANK11)
    b = rank_breakdown(cfg, BETA0)
    assert b.total == rank_simplex(cfg, BETA0) == 11
    assert b.by_dimension() == {1: 3, 2: 6, 3: 2}
    assert formulas(b).count("3-1-1+1") == 3
    assert "9-3-3-3+1+1+1-1" in formulas(b)


def test_contributions_in_range():
    for cfg, w, beta in random_corpus()[:20]:
        for c in dim_log_free(cfg, beta, w).contributions:
            assert 0 <= c.value <= c.volume


@pytest.mark.parametrize("case", range(len(COVERAGE_CASES)))
def test_facet_with_several_covered_cosets(case):
    A, w, beta, expected = COVERAGE_CASES[case]
    assert dim_log_free(make_configuration(A), beta, w).total == expected


def test_unimodular_points_of_na_give_one_series():
    for A, w in UNIMODULAR:
        cfg = make_configuration(A)
        for y in [(0,) * cfg.n, (1,) + (0,) * (cfg.n - 1), tuple(range(cfg.n))]:
            beta = cfg.combine(y)
            assert dim_log_free(cfg, beta, w).total == 1


def test_rank_square_matrix_is_one():
    cfg = make_configuration([[1, 1], [0, 3]])
    for beta in [(0, 0), (F(1, 2), F(7, 3)), (-4, 5)]:
        assert rank_simplex(cfg, beta) == 1
        assert not is_exceptional(cfg, beta).exceptional


def test_not_simplex():
    cfg = make_configuration(SQUARE)
    with pytest.raises(NotSimplex):
        rank_simplex(cfg, (1, 1, 1))
    with pytest.raises(NotSimplex):
        is_cohen_macaulay(cfg)


def test_rank11_exceptional():
    cfg = make_configuration(RANK11)
    res = is_exceptional(cfg, BETA0)
    assert res.exceptional and res.rank == 11 and res.volume == 9
    rays = {res.witness.face1.vertices, res.witness.face2.vertices}
    assert rays <= {(0,), (3,), (8,)}
    assert res.witness.meet.members == ()
    assert not is_exceptional(cfg, cfg.columns[0]).exceptional


def test_generic_rank_rank11():
    cfg = make_configuration(RANK11)
    rng = random.Random(5)
    for _ in range(3):
        beta = tuple(F(rng.randint(-10 ** 6, 10 ** 6), rng.randint(10 ** 5, 10 ** 6)) for _ in range(3))
        assert rank_simplex(cfg, beta) == 9


def test_rank_at_least_volume_on_lattice_points():
    cfg = make_configuration(RANK11)
    vol = configuration_volume(cfg)
    for beta in cone_lattice_points(cfg, 0, 3):
        r = rank_simplex(cfg, beta)
        assert r >= vol
        assert (r > vol) == is_exceptional(cfg, beta).exceptional


def test_sweeps():
    assert exceptional_sweep(make_configuration(RANK11), (0, 3)) == [tuple(F(1) for _ in range(3))]
    assert exceptional_sweep(make_configuration(SMALL), (0, 6)) == []
    assert exceptional_sweep(make_configuration([[1, 0], [0, 1]]), (0, 4)) == []


def test_box_points_and_holes():
    cfg = make_configuration(RANK11)
    pts = box_points(cfg)
    assert len(pts) == 9 and (0, 0, 0) in pts
    hs = holes(cfg, 4)
    assert (1, 1, 1) in hs
    assert all(not semigroup_member(cfg, h) for h in hs)
    assert holes(make_configuration(SMALL), 6) == []


def test_cohen_macaulay():
    res = is_cohen_macaulay(make_configuration(RANK11), 6)
    assert res.verdict == NOT_CM and res.is_cm is False
    beta, m1, m2 = res.witness
    cfg = make_configuration(RANK11)
    assert not semigroup_member(cfg, beta)
    assert not set(j for j, x in enumerate(m1) if x) & set(j for j, x in enumerate(m2) if x)
    for m in (m1, m2):
        assert semigroup_member(cfg, tuple(b + a for b, a in zip(beta, cfg.combine(m))))
    assert is_cohen_macaulay(make_configuration(SMALL)).verdict == CM
    assert is_cohen_macaulay(make_configuration([[1, 0, 0], [0, 1, 0], [0, 0, 1]])).is_cm is True


@pytest.mark.parametrize("points, cm", [
    ((0, 1, 4), True),  # a hypersurface, although (1,2) + N a_3 are all holes
    ((0, 1, 3, 4), False),
    ((0, 1, 3, 5), True),
    ((0, 1, 4, 5), False),
    ((0, 2, 5, 6), False),
    ((0, 1, 2, 5), True),
])
def test_cohen_macaulay_curves_match_exceptional_sweep(points, cm):
    cfg = make_configuration([[1] * len(points), list(points)])
    res = is_cohen_macaulay(cfg, 8)
    assert res.is_cm is cm
    assert (res.witness is None) is cm
    assert (exceptional_sweep(cfg, (0, 6)) == []) is cm


def test_apery_set_size():
    assert len(apery_set(make_configuration(SMALL))) == 2
    assert len(apery_set(make_configuration(RANK11))) == 11
