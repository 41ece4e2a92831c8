from __future__ import annotations

import random
from fractions import Fraction

import pytest

from corpus import BETA0, RANK11, SMALL, random_configuration, random_generic_weight
from gkz.errors import NonGenericWeight
from gkz.geometry import cone_faces, make_configuration, regular_triangulation
from gkz.monoid import semigroup_member
from gkz.oracle import oracle_e_tau, oracle_lower_hull, oracle_n_v, oracle_series_check
from gkz.series import n_v_points, phi_series

F = Fraction
HALF = (F(1, 2), F(0), F(1, 2))


def test_lower_hull_small_example():
    cfg = make_configuration(SMALL)
    for w in [(0, 1, 0), (0, -1, 0)]:
        assert oracle_lower_hull(cfg, w).cells == regular_triangulation(cfg, w).cells
    with pytest.raises(NonGenericWeight):
        oracle_lower_hull(cfg, (0, 0, 0))


def test_lower_hull_square_matrix():
    cfg = make_configuration([[1, 1], [2, 5]])
    assert [c.vertices for c in oracle_lower_hull(cfg, (3, -1)).cells] == [(0, 1)]


@pytest.mark.parametrize("seed", range(20))
def test_lower_hull_random(seed):
    rng = random.Random(1000 + seed)
    cfg = random_configuration(rng)
    w = random_generic_weight(rng, cfg)
    assert oracle_lower_hull(cfg, w).cells == regular_triangulation(cfg, w).cells


def test_e_tau_oracle_examples():
    cfg = make_configuration(SMALL)
    for tau in regular_triangulation(cfg, (0, 1, 0)).faces:
        assert {c.rep for c in oracle_e_tau(cfg, tau, (1, 1), 4)} == {(0, 0)}
    r11 = make_configuration(RANK11)
    empty = min(cone_faces(r11), key=lambda f: f.span_dim)
    for beta in [BETA0, (2, 3, 1), (1, 0, 0)]:
        assert bool(oracle_e_tau(r11, empty, beta, 4)) == semigroup_member(r11, beta)
    ray1 = next(f for f in cone_faces(r11) if f.vertices == (0,) and f.span_dim == 1)
    assert {c.rep for c in oracle_e_tau(r11, ray1, BETA0, 4)} == {(0, 0, 0)}


def test_n_v_oracle_matches_main():
    cfg = make_configuration(SMALL)
    T = regular_triangulation(cfg, (0, 1, 0))
    assert oracle_n_v(cfg, HALF, (0, 1, 0), 10) == set(n_v_points(cfg, HALF, T, 10))
    assert oracle_n_v(cfg, (0, 1, 0), (0, 1, 0), 10) == {(0, 0, 0)}


def test_series_oracle():
    cfg = make_configuration(SMALL)
    poly = phi_series(cfg, (0, 1, 0), (0, 1, 0), 10)
    assert oracle_series_check(cfg, (0, 1, 0), (0, 1, 0), 10, terms=poly.terms)
    s = phi_series(cfg, HALF, (0, 1, 0), 10)
    assert oracle_series_check(cfg, HALF, (0, 1, 0), 10, terms=s.terms)
    wrong = list(s.terms)
    wrong[1] = (wrong[1][0], wrong[1][1] * 2)
    assert not oracle_series_check(cfg, HALF, (0, 1, 0), 10, terms=tuple(wrong))
    assert not oracle_series_check(cfg, HALF, (0, 1, 0), 10, terms=s.terms[:-1])
