import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from carleson import (
    JordanCurve,
    beta,
    beta_line,
    bilateral_beta,
    dini_epsilon_sq,
    epsilon,
    geom_sample,
    make_circle,
    make_polygon,
)
from carleson.errors import CenterNotOnBoundary, RadiusWarning
from carleson.functions import ball_points, convex_hull
from carleson.zoo import l_shape
from oracles import (
    beta_pairwise,
    bilateral_beta_dense,
    circle_epsilon,
    clip_polyline_to_ball,
    random_star_polygon,
)

# frozen outputs of the oracles in tests/oracles.py on the 4096-gon
BETA_CIRCLE_02 = 0.0500007070757999
BBETA_CIRCLE_02 = 0.1990221999328884
SPUR = [(-3, -2), (-2, -2), (-2, -0.001), (0, 0), (-2, 0.001), (-2, 2), (-3, 2)]
BBETA_SPUR = 1.0004999999375


@pytest.mark.parametrize("r", [0.05, 0.1, 0.2, 0.3, 0.4])
def test_epsilon_circle_closed_form(circle, r):
    assert epsilon(circle, (1, 0), r) == pytest.approx(circle_epsilon(r), abs=1e-4)


def test_epsilon_circle_value(circle):
    assert epsilon(circle, (1, 0), 0.2) == pytest.approx(0.200335, abs=1e-5)


def test_straight_edge_is_flat(slab):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RadiusWarning)
        assert epsilon(slab, (0.3, 0), 0.5) < 1e-6
        assert beta(slab, (0.3, 0), 0.5) < 1e-6
        assert bilateral_beta(slab, (0.3, 0), 0.5) < 1e-6


def test_reflex_corner():
    assert epsilon(l_shape(), (1, 1), 0.1, check_radius=False) == pytest.approx(math.pi / 2)
    assert epsilon(l_shape(), (2, 0), 0.1, check_radius=False) == pytest.approx(math.pi / 2)


def test_epsilon_is_pi_when_one_side_is_empty(circle):
    assert epsilon(circle, (1, 0), 2.5) == pytest.approx(math.pi)


def test_center_must_be_on_curve(circle):
    with pytest.raises(CenterNotOnBoundary):
        epsilon(circle, (0.5, 0), 0.1)
    with pytest.raises(CenterNotOnBoundary):
        bilateral_beta(circle, (0.5, 0), 0.1)


def test_coarse_radius_warns():
    c = make_circle(1.0, 16)
    with pytest.warns(RadiusWarning):
        epsilon(c, (1, 0), 0.1)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        epsilon(c, (1, 0), 0.1, check_radius=False)


def test_beta_circle(circle):
    b = beta(circle, (1, 0), 0.2)
    assert b == pytest.approx(0.05, rel=0.1)
    assert b == pytest.approx(BETA_CIRCLE_02, rel=1e-9)


def test_beta_line_realises_value(circle):
    x = np.array([1.0, 0.0])
    bl = beta_line(circle, x, 0.2)
    pts = ball_points(circle, x, 0.2)
    n = np.array([-bl.direction[1], bl.direction[0]])
    assert np.abs((pts - bl.point) @ n).max() == pytest.approx(bl.value * 0.2, rel=1e-9)


def test_bilateral_circle(circle):
    bb = bilateral_beta(circle, (1, 0), 0.2)
    assert bb >= beta(circle, (1, 0), 0.2)
    assert bb == pytest.approx(BBETA_CIRCLE_02, rel=1e-6)


def test_spur_is_flat_but_not_bilaterally():
    c = make_polygon(SPUR)
    b = beta(c, (0, 0), 1.0, check_radius=False)
    bb = bilateral_beta(c, (0, 0), 1.0, check_radius=False)
    assert b < 1e-3
    assert bb == pytest.approx(1.0, abs=0.01)
    assert bb == pytest.approx(BBETA_SPUR, rel=1e-6)


@pytest.mark.slow
def test_bilateral_matches_dense_oracle_on_polygon():
    rng = np.random.default_rng(11)
    v = random_star_polygon(rng, 12)
    c = JordanCurve.from_vertices(v)
    x = c.point_at(np.array([0.3 * c.perimeter]))[0]
    ours = bilateral_beta(c, x, 0.7, check_radius=False)
    ref = bilateral_beta_dense(c.vertices, x, 0.7, n_angles=1000)
    assert ours == pytest.approx(ref, rel=1e-3)


def test_convex_hull_square():
    pts = np.array([[0, 0], [1, 0], [1, 1], [0, 1], [0.5, 0.5], [0.5, 0]])
    assert sorted(map(tuple, convex_hull(pts))) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def _random_instance(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(6, 24))
    c = JordanCurve.from_vertices(random_star_polygon(rng, n))
    x = c.point_at(np.array([rng.uniform(0, c.perimeter)]))[0]
    r = float(rng.uniform(0.2, 1.0))
    return c, x, r


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_beta_matches_pairwise_oracle(seed):
    c, x, r = _random_instance(seed)
    pieces = clip_polyline_to_ball(c.vertices, x, r)
    pts = np.array([p for piece in pieces for p in piece])
    ours = beta(c, x, r, check_radius=False)
    ref = beta_pairwise(pts, r)
    assert ours == pytest.approx(ref, rel=1e-9, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 100_000), st.floats(0, 2 * math.pi), st.floats(-5, 5),
       st.floats(0.1, 10))
def test_invariance_and_ordering(seed, theta, t, lam):
    c, x, r = _random_instance(seed)
    s0 = geom_sample(c, x, r, check_radius=False)
    moved = c.transformed(theta, (t, -t), lam)
    c_, s_ = math.cos(theta), math.sin(theta)
    x1 = lam * np.array([c_ * x[0] - s_ * x[1], s_ * x[0] + c_ * x[1]]) + (t, -t)
    s1 = geom_sample(moved, x1, lam * r, check_radius=False)
    for name in ("epsilon", "beta", "bbeta"):
        a, b = getattr(s0, name), getattr(s1, name)
        assert b == pytest.approx(a, rel=1e-9, abs=1e-12), name
    assert s0.beta <= s0.bbeta
    assert 0 <= s0.epsilon <= math.pi


def test_dini_straight_edge(slab):
    assert dini_epsilon_sq(slab, (0, 0), 0.01, 1.0, 20) < 1e-12


def test_dini_injected_epsilon():
    v = dini_epsilon_sq(None, None, 1e-3, 1.0, 400, eps_fn=lambda r: r)
    assert v == pytest.approx((1 - 1e-6) / 2, rel=1e-4)


def test_dini_circle_matches_quadrature(circle):
    v = dini_epsilon_sq(circle, (1, 0), 1e-3, 0.5, 200)
    ref, _ = quad(lambda r: circle_epsilon(r) ** 2 / r, 1e-3, 0.5)
    assert v == pytest.approx(ref, rel=1e-3)


def test_dini_rejects_bad_range(circle):
    with pytest.raises(ValueError):
        dini_epsilon_sq(circle, (1, 0), 0.5, 0.1, 10)
