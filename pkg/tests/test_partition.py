"""Certified bisector-ladder partitions of rational point sets."""

import random
from fractions import Fraction

import pytest

from incilab.algebra import TriPoly, X, Y, Z
from incilab.geom import Rational3Point, RationalLine
from incilab.partition import (
    PartitionBudgetError,
    PartitionPoly,
    build_partition,
    cell_occupancy,
    classes_crossed,
    classify_lines,
    classify_points,
    degree_budget,
    level_degree_cap,
    sign_vector,
)

P = Rational3Point
L = RationalLine


def random_points(count, seed, spread=60):
    rng = random.Random(seed)
    seen = set()
    while len(seen) < count:
        seen.add(tuple(rng.randint(-spread, spread) for _ in range(3)))
    return [P(*c) for c in sorted(seen)]


# -- degree bookkeeping ----------------------------------------------------------


def test_level_degree_cap_values():
    # smallest d with C(d+3,3) - 1 >= 2^j
    assert [level_degree_cap(j) for j in range(1, 6)] == [1, 2, 2, 3, 4]
    with pytest.raises(ValueError):
        level_degree_cap(0)


def test_degree_budget_is_partial_sum_of_caps():
    assert [degree_budget(t) for t in range(1, 5)] == [1, 3, 5, 8]


# -- construction on structured inputs ---------------------------------------------


def test_collinear_sixteen_points_split_exactly():
    pts = [P(i, 0, 0) for i in range(1, 17)]
    part = build_partition(pts, 2, Fraction(0), seed=0)
    g1, g2 = part.levels
    assert g1 == 2 * X - TriPoly.constant(17)  # median plane of 1..16
    # second level splits each half of 8 at its own median, 9/2 and 25/2
    assert g2 == (2 * X - TriPoly.constant(9)) * (2 * X - TriPoly.constant(25))
    occ, surface = cell_occupancy(part, pts)
    assert sorted(occ.values()) == [4, 4, 4, 4]
    assert surface == 0
    assert part.degree == 3 <= degree_budget(2)


def test_odd_count_median_puts_one_point_on_surface():
    pts = [P(i, 0, 0) for i in range(7)]
    part = build_partition(pts, 1, Fraction(0), seed=0)
    occ, surface = cell_occupancy(part, pts)
    assert sorted(occ.values()) == [3, 3]
    assert surface == 1


def test_structured_grid_gets_zero_free_cut():
    pts = [P(a, b, c) for a in range(3) for b in range(3) for c in range(3)]
    part = build_partition(pts, 1, Fraction(1, 10), seed=0)
    occ, surface = cell_occupancy(part, pts)
    assert surface == 0
    assert max(occ.values()) <= -(-27 * 6 // 10)  # ceil((1/2 + eps) m)


def test_build_partition_input_validation():
    pts = [P(0, 0, 0), P(1, 0, 0)]
    with pytest.raises(ValueError):
        build_partition([], 1)
    with pytest.raises(ValueError):
        build_partition(pts, 0)
    with pytest.raises(ValueError):
        build_partition(pts, 1, Fraction(1, 2))
    with pytest.raises(ValueError):
        build_partition(pts, 1, Fraction(-1, 10))


def test_budget_error_carries_best_slack():
    err = PartitionBudgetError("no certified cut", best_slack=Fraction(3, 2))
    assert err.best_slack == Fraction(3, 2)
    assert isinstance(err, RuntimeError)


# -- certified properties over random inputs ----------------------------------------


@pytest.mark.parametrize("seed", [1, 2])
def test_random_cloud_partition_is_certified(seed):
    pts = random_points(256, seed)
    t = 3
    part = build_partition(pts, t, Fraction(1, 10), seed=seed)
    assert part.degree <= degree_budget(t)
    occ, surface = cell_occupancy(part, pts)
    cap = 256
    for _ in range(t):
        cap = -(-cap * 6 // 10)  # ceil((1/2 + eps) * previous)
    assert max(occ.values(), default=0) <= cap
    # every counted point lands in exactly one bucket
    assert sum(occ.values()) + surface == 256

    rng = random.Random(seed + 99)
    lines = [
        L(P(*(rng.randint(-50, 50) for _ in range(3))), d)
        for d in [(1, 0, 0), (1, 1, 1), (2, -3, 5), (0, 1, -4)]
    ]
    lc = classify_lines(part, lines)
    assert lc.max_roots <= part.degree


def test_classify_points_matches_sign_vectors():
    pts = random_points(64, 5)
    part = build_partition(pts, 2, Fraction(1, 10), seed=5)
    on_surface, in_cells = classify_points(part, pts)
    assert sorted(on_surface + in_cells) == list(range(64))
    for i in on_surface:
        assert 0 in sign_vector(part, pts[i])
    for i in in_cells:
        assert 0 not in sign_vector(part, pts[i])


# -- explicit-level seam -------------------------------------------------------------


def test_from_levels_normalizes_and_validates():
    part = PartitionPoly.from_levels([2 * X - 4 * Y, Z])
    assert part.levels[0] == X - 2 * Y
    assert part.t == 2
    assert part.degree == 2
    with pytest.raises(ValueError):
        PartitionPoly.from_levels([X, TriPoly.zero()])


def test_classify_lines_against_known_surface():
    part = PartitionPoly.from_levels([Z, X - TriPoly.constant(1)])
    lines = [
        L(P(0, 0, 0), (1, 0, 0)),  # inside z = 0
        L(P(5, 5, -3), (0, 0, 1)),  # pierces z = 0 once, misses x = 1
        L(P(0, 0, 0), (1, 0, 1)),  # crosses both sheets
    ]
    lc = classify_lines(part, lines)
    assert lc.contained == [0]
    assert lc.crossing == [(1, 1), (2, 2)]
    assert lc.max_roots == 2 <= part.degree


def test_classes_crossed_enumerates_sign_cells():
    part = PartitionPoly.from_levels([X, Y])
    line = L(P(-5, Fraction(-9, 2), 3), (1, 1, 0))
    assert classes_crossed(part, line) == {(-1, -1), (-1, 1), (1, 1)}
    # contained lines have no full-sign samples and are rejected outright
    with pytest.raises(ValueError):
        classes_crossed(PartitionPoly.from_levels([Z]), L(P(0, 0, 0), (1, 0, 0)))


def test_partition_json_round_trip():
    pts = [P(i, i * i, 0) for i in range(9)]
    part = build_partition(pts, 2, Fraction(1, 10), seed=3)
    data = part.to_json_dict()
    assert data["t"] == 2 and data["D"] == part.degree
    back = PartitionPoly.from_json_dict(data)
    assert back.levels == part.levels
    assert back.epsilon == part.epsilon
