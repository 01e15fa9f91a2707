import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from carleson import (
    JordanCurve,
    RegionLabel,
    decompose_circle,
    largest_arcs,
    shortest_arc_between,
)
from carleson.circle import CirclePartition, LabeledArc
from carleson.errors import PointNotOnCircle
from oracles import random_star_polygon


def test_circle_two_arcs(circle):
    part = decompose_circle(circle, (1, 0), 0.2)
    assert len(part.arcs) == 2
    inner = [a for a in part.arcs if a.side == RegionLabel.INSIDE_PLUS]
    assert len(inner) == 1
    assert inner[0].span == pytest.approx(2 * math.acos(0.1), abs=2e-5)
    assert inner[0].span == pytest.approx(2.941258, abs=2e-5)


def test_far_circle_is_one_outside_arc(circle):
    part = decompose_circle(circle, (5, 5), 0.5)
    assert len(part.arcs) == 1
    assert part.arcs[0].side == RegionLabel.OUTSIDE_MINUS
    assert part.arcs[0].length == pytest.approx(math.pi)
    assert largest_arcs(part) == (0.0, pytest.approx(math.pi))


def test_full_inside_arc(circle):
    part = decompose_circle(circle, (0, 0), 0.5)
    assert largest_arcs(part) == (pytest.approx(math.pi), 0.0)


def test_straight_edge_halves(slab):
    part = decompose_circle(slab, (0.3, 0), 0.4)
    assert [a.length for a in part.arcs] == [pytest.approx(0.4 * math.pi)] * 2
    assert largest_arcs(part) == (pytest.approx(0.4 * math.pi), pytest.approx(0.4 * math.pi))


def test_largest_arcs_per_side():
    r = 1.0
    arcs = (LabeledArc(0.0, 3.0, RegionLabel.INSIDE_PLUS, r),
            LabeledArc(3.0, 5.0, RegionLabel.OUTSIDE_MINUS, r),
            LabeledArc(5.0, 6.28, RegionLabel.INSIDE_PLUS, r))
    part = CirclePartition(np.zeros(2), r, arcs, np.array([0.0, 3.0, 5.0]), np.zeros((3, 2)))
    assert largest_arcs(part) == (pytest.approx(3.0), pytest.approx(2.0))


def test_shortest_arc_examples():
    assert shortest_arc_between((0, 0), 1, (1, 0), (0, 1)) == pytest.approx(math.pi / 2)
    assert shortest_arc_between((0, 0), 1, (1, 0), (1, 0)) == 0
    assert shortest_arc_between((0, 0), 1, (1, 0), (-1, 0)) == pytest.approx(math.pi)
    assert shortest_arc_between((0, 0), 2, (0, 2), (2, 0)) == pytest.approx(math.pi)


def test_shortest_arc_rejects_off_circle():
    with pytest.raises(PointNotOnCircle):
        shortest_arc_between((0, 0), 1, (1.1, 0), (0, 1))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.05, 1.5))
def test_partition_conservation_and_alternation(seed, r):
    rng = np.random.default_rng(seed)
    c = JordanCurve.from_vertices(random_star_polygon(rng, 20))
    x = c.point_at(np.array([rng.uniform(0, c.perimeter)]))[0]
    part = decompose_circle(c, x, r)
    assert part.total_length == pytest.approx(2 * math.pi * r, rel=1e-9)
    sides = [a.side for a in part.arcs]
    if len(sides) >= 2:
        assert all(s != t for s, t in zip(sides, sides[1:] + sides[:1]))
    for a in part.arcs:
        assert 0 < a.length <= 2 * math.pi * r + 1e-12
        assert a.side != RegionLabel.ON_BOUNDARY


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.1, 10.0))
def test_partition_scales(seed, lam):
    rng = np.random.default_rng(seed)
    c = JordanCurve.from_vertices(random_star_polygon(rng, 16))
    x = c.vertices[3]
    p0 = decompose_circle(c, x, 0.4)
    p1 = decompose_circle(c.transformed(scale=lam), lam * x, 0.4 * lam)
    assert [a.side for a in p0.arcs] == [a.side for a in p1.arcs]
    np.testing.assert_allclose([a.length * lam for a in p0.arcs],
                               [a.length for a in p1.arcs], rtol=1e-9)
