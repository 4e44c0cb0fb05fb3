"""Exact incidence counting, coplanarity statistics, and quadric helpers."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from incilab.configs import GeneratorSpec, generate
from incilab.geom import Rational3Point, RationalLine, RationalPlane
from incilab.incidence import (
    Configuration,
    DegeneracyError,
    IncidenceTally,
    InvalidConfigurationError,
    MONOMIALS_DEG2,
    Quadric,
    assign_to_planes,
    count_incidences,
    max_coplanar_lines,
    one_poor_count,
    regulus_through,
    rich_points_per_line,
    richness_histogram,
    two_rich_count,
)

P = Rational3Point
L = RationalLine


def small_config(pts, lns):
    return Configuration(tuple(pts), tuple(lns), {})


@pytest.fixture
def cross_pair():
    """Two stacked horizontal lines plus one vertical rung through both."""
    pts = (P(0, 0, 0), P(1, 0, 0), P(0, 0, 1), P(1, 0, 1))
    lns = (
        L(P(0, 0, 0), (1, 0, 0)),
        L(P(0, 0, 1), (1, 0, 0)),
        L(P(0, 0, 0), (0, 0, 1)),
    )
    return small_config(pts, lns)


# -- counting ------------------------------------------------------------------


def test_grid3d_counts_by_hand():
    cfg = generate(GeneratorSpec("grid3d", {"N": 2}))
    tally = count_incidences(cfg)
    assert (cfg.m, cfg.n, tally.total) == (8, 12, 24)
    assert all(r == 3 for r in tally.per_point)
    assert all(c == 2 for c in tally.per_line)


def test_tally_json_shape(cross_pair):
    d = count_incidences(cross_pair).to_json_dict()
    assert d["I"] == 6
    assert d["richness"] == {"1": 2, "2": 2}
    assert d["per_line"] == [2, 2, 2]


def test_strategies_agree_on_generated_families():
    for spec in (
        GeneratorSpec("elekes2d", {"N": 2}),
        GeneratorSpec("grid3d", {"N": 3}),
        GeneratorSpec("random", {"m": 150, "n": 90}, seed=11),
    ):
        cfg = generate(spec)
        a = count_incidences(cfg, strategy="naive")
        b = count_incidences(cfg, strategy="grid")
        assert a.points_by_line == b.points_by_line


def test_grid_strategy_with_boundary_aligned_cells():
    # integer points with cell width 1 put every point on a cell wall
    cfg = generate(GeneratorSpec("grid3d", {"N": 3}))
    a = count_incidences(cfg, strategy="naive")
    b = count_incidences(cfg, strategy="grid", cell_width=Fraction(1))
    c = count_incidences(
        cfg, strategy="grid", cell_width=Fraction(1, 3), bbox=((0, 0, 0), (1, 1, 1))
    )
    assert a.points_by_line == b.points_by_line == c.points_by_line


def test_thread_count_does_not_change_answer():
    cfg = generate(GeneratorSpec("random", {"m": 80, "n": 150}, seed=4))
    one = count_incidences(cfg, threads=1)
    four = count_incidences(cfg, threads=4)
    assert one.points_by_line == four.points_by_line


def test_thread_env_cap(monkeypatch):
    monkeypatch.setenv("INCILAB_THREADS", "2")
    cfg = generate(GeneratorSpec("random", {"m": 40, "n": 130}, seed=9))
    assert (
        count_incidences(cfg).points_by_line
        == count_incidences(cfg, threads=1).points_by_line
    )


def test_unknown_strategy_rejected(cross_pair):
    with pytest.raises(ValueError):
        count_incidences(cross_pair, strategy="fast")


coords = st.tuples(*[st.integers(min_value=-6, max_value=6)] * 3)


@settings(deadline=None, max_examples=40)
@given(
    st.lists(coords, min_size=1, max_size=12, unique=True),
    st.lists(st.tuples(coords, coords.filter(lambda v: any(v))), min_size=1, max_size=10),
)
def test_grid_matches_naive_on_random_input(pts, raw_lines):
    lines = tuple({L(P(*b), d) for b, d in raw_lines})
    cfg = small_config([P(*c) for c in pts], lines)
    a = count_incidences(cfg, strategy="naive")
    b = count_incidences(cfg, strategy="grid")
    assert a.points_by_line == b.points_by_line


# -- richness and coplanarity ----------------------------------------------------


def test_richness_statistics(cross_pair):
    hist = richness_histogram(count_incidences(cross_pair))
    assert hist == {1: 2, 2: 2}
    assert two_rich_count(hist) == 2
    assert one_poor_count(hist) == 2


def test_max_coplanar_lines_degenerate_inputs():
    assert max_coplanar_lines(()) == (0, None)
    only = L(P(0, 0, 0), (1, 2, 3))
    assert max_coplanar_lines((only,)) == (1, None)


def test_max_coplanar_lines_on_families():
    pack = generate(GeneratorSpec("coplanar_pack", {"k": 2, "N": 2}))
    s, witness = max_coplanar_lines(pack.lines)
    assert s == 8
    assert witness.coeffs == (0, 0, 1, 0)
    grid = generate(GeneratorSpec("grid3d", {"N": 2}))
    assert max_coplanar_lines(grid.lines)[0] == 4


def test_rich_points_per_line():
    grid = generate(GeneratorSpec("grid3d", {"N": 2}))
    assert rich_points_per_line(grid) == [2] * 12
    assert rich_points_per_line(grid, threshold=4) == [0] * 12


# -- plane assignment ------------------------------------------------------------


def test_assign_to_planes_first_come_first_serve(cross_pair):
    planes = [RationalPlane(0, 0, 1, 0), RationalPlane(0, 0, 1, -1)]
    pa = assign_to_planes(cross_pair.points, cross_pair.lines, planes)
    assert pa.point_plane == [0, 0, 1, 1]
    assert pa.line_plane == [0, 1, None]  # the vertical rung fits neither plane
    assert pa.within_plane_incidences == [2, 2]
    assert pa.cross_charges == 2
    subs = pa.sub_configurations
    assert [(s.m, s.n) for s in subs] == [(2, 1), (2, 1)]
    total = count_incidences(cross_pair).total
    assert sum(pa.within_plane_incidences) + pa.cross_charges == total


def test_assign_to_planes_duplicate_membership_goes_to_first():
    # a line in both planes of a pencil is charged to the first listed plane
    pts = (P(0, 0, 0),)
    lns = (L(P(0, 0, 0), (1, 0, 0)),)
    planes = [RationalPlane(0, 0, 1, 0), RationalPlane(0, 1, 0, 0)]
    pa = assign_to_planes(pts, lns, planes)
    assert pa.line_plane == [0]
    assert pa.point_plane == [0]


# -- configuration validation ------------------------------------------------------


def test_validate_rejects_duplicate_points():
    cfg = small_config([P(0, 0, 0), P(0, 0, 0)], [L(P(0, 0, 0), (1, 0, 0))])
    with pytest.raises(InvalidConfigurationError):
        cfg.validate()


def test_validate_rejects_duplicate_lines_up_to_parametrization():
    cfg = small_config(
        [P(0, 0, 0)],
        [L(P(0, 0, 0), (1, 0, 0)), L(P(5, 0, 0), (-2, 0, 0))],
    )
    with pytest.raises(InvalidConfigurationError):
        cfg.validate()


# -- quadrics and reguli -----------------------------------------------------------


def test_quadric_canonicalizes_scaling():
    a = Quadric((0, 0, 0, 2, 0, 0, 0, 0, -2, 0))
    b = Quadric((0, 0, 0, -1, 0, 0, 0, 0, 1, 0))
    assert a == b
    assert a.coeffs == (0, 0, 0, 1, 0, 0, 0, 0, -1, 0)


def test_quadric_membership():
    saddle = Quadric((0, 0, 0, 1, 0, 0, 0, 0, -1, 0))  # z = x y
    assert saddle.contains_point(P(2, 3, 6))
    assert not saddle.contains_point(P(2, 3, 5))
    assert saddle.contains_line(L(P(2, 0, 0), (0, 1, 2)))
    assert not saddle.contains_line(L(P(0, 0, 0), (1, 1, 1)))
    assert len(MONOMIALS_DEG2) == 10


def test_regulus_through_three_rulings():
    rulings = [L(P(a, 0, 0), (0, 1, a)) for a in (0, 1, 2)]
    quad = regulus_through(*rulings)
    assert quad.coeffs == (0, 0, 0, 1, 0, 0, 0, 0, -1, 0)
    # the regulus contains the opposite family too
    assert quad.contains_line(L(P(0, 5, 0), (1, 0, 5)))


def test_regulus_rejects_non_skew_input():
    meet1 = L(P(0, 0, 0), (1, 0, 0))
    meet2 = L(P(0, 0, 0), (0, 1, 0))
    far = L(P(0, 0, 7), (1, 1, 0))
    with pytest.raises(ValueError):
        regulus_through(meet1, meet2, far)
