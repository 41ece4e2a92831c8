from __future__ import annotations

import random
from fractions import Fraction

import pytest

from corpus import RANK11, SMALL, random_configuration, random_generic_weight
from gkz.errors import NonGenericWeight, NotHomogeneous, RankDeficient
from gkz.geometry import (
    cone_faces,
    configuration_volume,
    facets,
    is_generic_weight,
    is_simplex,
    make_configuration,
    normalized_volume,
    regular_triangulation,
)
from gkz.lattice import lattice_index
from gkz.oracle import oracle_lower_hull


def vertex_sets(T):
    return sorted(c.vertices for c in T.cells)


def test_make_configuration():
    assert make_configuration(SMALL).h == (1, 0)
    assert make_configuration(RANK11).h == (1, 0, 0)
    with pytest.raises(NotHomogeneous):
        make_configuration([[1, 2]])
    with pytest.raises(RankDeficient):
        make_configuration([[1, 1], [2, 2]])


def test_small_triangulations():
    cfg = make_configuration(SMALL)
    T = regular_triangulation(cfg, (0, 1, 0))
    assert vertex_sets(T) == [(0, 2)]
    assert T.cells[0].members == (0, 1, 2)
    T2 = regular_triangulation(cfg, (0, -1, 0))
    assert vertex_sets(T2) == [(0, 1), (1, 2)]


def test_square_configuration_is_one_cell():
    cfg = make_configuration([[1, 1], [0, 3]])
    assert vertex_sets(regular_triangulation(cfg, (5, -2))) == [(0, 1)]
    assert is_generic_weight(cfg, (0, 0))


def test_generic_weight():
    cfg = make_configuration(SMALL)
    assert not is_generic_weight(cfg, (0, 0, 0))
    assert is_generic_weight(cfg, (0, 1, 0))
    with pytest.raises(NonGenericWeight):
        regular_triangulation(cfg, (0, 0, 0))
    # the symbolic tie-breaker resolves a flat lift
    assert regular_triangulation(cfg, (0, 0, 0), perturb=True).cells


def test_cone_faces():
    cfg = make_configuration(RANK11)
    dims = sorted(f.span_dim for f in cone_faces(cfg))
    assert dims == [0, 1, 1, 1, 2, 2, 2, 3]
    small = make_configuration(SMALL)
    assert sorted(f.members for f in cone_faces(small)) == [(), (0,), (0, 1, 2), (2,)]
    ident = make_configuration([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert len(cone_faces(ident)) == 8


def test_cone_faces_closed_under_intersection():
    cfg = make_configuration(RANK11)
    sets = {frozenset(f.members) for f in cone_faces(cfg)}
    assert all(a & b in sets for a in sets for b in sets)


def test_volumes():
    cfg = make_configuration(RANK11)
    T = regular_triangulation(cfg, [0, 1, 1, 0, 1, 1, 1, 1, 0], perturb=True)
    assert len(T.cells) == 1 and normalized_volume(cfg, T.cells[0]) == 9
    assert configuration_volume(cfg) == 9
    small = make_configuration(SMALL)
    T = regular_triangulation(small, (0, 1, 0))
    assert normalized_volume(small, T.cells[0]) == 2
    assert all(normalized_volume(small, f) == 1 for f in T.faces if len(f.vertices) <= 1)


def test_facets():
    small = make_configuration(SMALL)
    T = regular_triangulation(small, (0, 1, 0))
    cell = T.cells[0]
    assert sorted(f.vertices for f in facets(cell, T)) == [(0,), (2,)]
    assert [f.vertices for f in facets(T.face((0,)), T)] == [()]
    assert facets(T.face(()), T) == []
    cfg = make_configuration(RANK11)
    T = regular_triangulation(cfg, [0, 1, 1, 0, 1, 1, 1, 1, 0], perturb=True)
    assert sorted(f.vertices for f in facets(T.cells[0], T)) == [(0, 3), (0, 8), (3, 8)]


def test_is_simplex():
    assert is_simplex(make_configuration(RANK11))
    assert not is_simplex(make_configuration([[1, 1, 1, 1], [0, 1, 0, 1], [0, 0, 1, 1]]))


@pytest.mark.parametrize("seed", range(25))
def test_random_triangulation_invariants(seed):
    rng = random.Random(seed)
    cfg = random_configuration(rng)
    w = random_generic_weight(rng, cfg)
    T = regular_triangulation(cfg, w)
    assert T.cells == oracle_lower_hull(cfg, w).cells
    # every point lies in some cell
    assert set().union(*(c.members for c in T.cells)) == set(range(cfg.n))
    # faces are closed under the face relation and carry consistent members
    for f in T.faces:
        for g in facets(f, T):
            assert set(g.vertices) < set(f.vertices)
            assert set(g.members) <= set(f.members)
    # vol(A) does not depend on the weight, and equals sum over cells of [ZA : Z a_I]
    assert configuration_volume(cfg) == sum(
        lattice_index(cfg.sublattice(c.vertices), cfg.za) for c in T.cells)
    w2 = random_generic_weight(rng, cfg)
    T2 = regular_triangulation(cfg, w2)
    assert sum(lattice_index(cfg.sublattice(c.vertices), cfg.za) for c in T2.cells) \
        == configuration_volume(cfg)


def test_weight_values_are_exact():
    cfg = make_configuration(SMALL)
    T = regular_triangulation(cfg, (Fraction(1, 3), Fraction(5, 4), 0))
    assert vertex_sets(T) == [(0, 2)]
