import json
import math

import numpy as np
import pytest

from carleson import make_koch
from carleson.analysis import (
    CSV_HEADER,
    GridRow,
    VerifyConfig,
    dini_report,
    fit_decay,
    read_csv,
    sample_grid,
    verify_theorem,
    write_csv,
)
from carleson.errors import InsufficientData, ScaleGuardViolation
from oracles import circle_epsilon


def _synthetic(values, radii, status="ok"):
    return [GridRow(0, 0.0, 0.0, float(r), float(v), 0.0, 0.0, status)
            for r, v in zip(radii, values)]


@pytest.fixture(scope="module")
def small_grid(circle):
    return sample_grid(circle, 3, 0.02, 0.2, 4)


def test_circle_grid_epsilon(circle):
    g = sample_grid(circle, 8, 0.01, 0.3, 16, columns=("epsilon",))
    assert len(g.rows) == 128
    ref = np.array([circle_epsilon(r) for r in g.radii])
    assert np.abs(g.table("epsilon") - ref).max() < 1e-3
    assert np.isnan(g.column("beta")).all()
    fit = fit_decay(g, "epsilon")
    assert fit.alpha_hat == pytest.approx(1.0, abs=0.05)
    assert fit.envelope and fit.n_points == 16


def test_grid_rows_are_center_major(small_grid):
    assert [r.center_index for r in small_grid.rows] == [0] * 4 + [1] * 4 + [2] * 4
    radii = np.array([r.radius for r in small_grid.rows[:4]])
    np.testing.assert_allclose(np.diff(np.log(radii)), math.log(10) / 3, rtol=1e-12)


def test_grid_independent_of_threads_and_order(circle, small_grid):
    threaded = sample_grid(circle, 3, 0.02, 0.2, 4, threads=4)
    assert threaded.rows == small_grid.rows
    rev = sample_grid(circle, 0, 0.02, 0.2, 4, centers=small_grid.centers[::-1])
    for i in range(3):
        a = [r for r in rev.rows if r.center_index == 2 - i]
        b = [r for r in small_grid.rows if r.center_index == i]
        assert [(r.epsilon, r.beta, r.bbeta) for r in a] == [(r.epsilon, r.beta, r.bbeta)
                                                             for r in b]


def test_grid_records_cell_failures(circle):
    g = sample_grid(circle, 0, 0.02, 0.2, 3, centers=[(1, 0), (0.5, 0)])
    status = g.table("status")
    assert set(status[0]) <= {"ok", "coarse"}
    assert set(status[1]) == {"CenterNotOnBoundary"}
    assert np.isnan(g.table("epsilon")[1]).all()


def test_grid_radius_cap(circle):
    with pytest.raises(ScaleGuardViolation):
        sample_grid(circle, 2, 0.1, 0.6, 3)


def test_fit_exact_power_law():
    r = np.geomspace(0.01, 1, 7)
    fit = fit_decay(_synthetic(2 * r ** 0.5, r), "epsilon")
    assert fit.C_hat == pytest.approx(2, abs=1e-9)
    assert fit.alpha_hat == pytest.approx(0.5, abs=1e-9)
    assert fit.r_squared == pytest.approx(1, abs=1e-9)
    assert fit.C_sup == pytest.approx(2, abs=1e-9)


def test_fit_envelope_takes_max():
    r = np.geomspace(0.01, 1, 5)
    rows = _synthetic(r, r) + _synthetic(3 * r, r)
    assert fit_decay(rows, "epsilon", envelope=True).C_hat == pytest.approx(3)
    pointwise = fit_decay(rows, "epsilon", envelope=False)
    assert pointwise.n_points == 10
    assert pointwise.C_hat == pytest.approx(math.sqrt(3))


def test_fit_flat_and_insufficient():
    r = np.geomspace(0.01, 1, 6)
    v = np.zeros(6)
    v[0] = 1e-3
    flat = fit_decay(_synthetic(v, r), "epsilon")
    assert flat.flat and flat.alpha_hat is None and flat.n_excluded == 5
    with pytest.raises(InsufficientData):
        fit_decay(_synthetic([1, 2], [0.1, 0.2]), "epsilon")
    partial = fit_decay(_synthetic([0, 1, 2, 3, 4], [0.1, 0.2, 0.3, 0.4, 0.5]), "epsilon")
    assert partial.n_excluded == 1 and not partial.flat


def test_csv_round_trip(tmp_path, small_grid):
    path = tmp_path / "grid.csv"
    write_csv(small_grid, path)
    assert path.read_text().splitlines()[0] == ",".join(CSV_HEADER)
    rows = read_csv(path)
    assert tuple(rows) == small_grid.rows
    for col in ("epsilon", "beta", "bbeta"):
        assert fit_decay(rows, col) == fit_decay(small_grid, col)


def test_csv_bad_header(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("a,b\n1,2\n")
    with pytest.raises(InsufficientData):
        read_csv(p)


@pytest.fixture(scope="module")
def circle_report(circle):
    return verify_theorem(circle, VerifyConfig(0.01, 0.3, n_centers=6, n_radii=8))


def test_verify_circle_passes(circle_report):
    rep = circle_report
    assert rep.status == "pass"
    assert all(rep.pass_flags.values())
    assert rep.epsilon_fit.alpha_hat == pytest.approx(1, abs=0.05)
    assert rep.beta_fit.alpha_hat >= 1 / 16
    assert rep.bbeta_drop > 0.2


def test_verify_nested_range_still_passes(circle):
    rep = verify_theorem(circle, VerifyConfig(0.03, 0.2, n_centers=6, n_radii=6))
    assert rep.status == "pass"


def test_report_document(circle_report):
    doc = circle_report.to_document()
    text = json.dumps(doc)
    assert doc["status"] == "pass"
    for v in doc["radii"] + doc["bbeta_sup"]:
        assert len(f"{v:.15g}".replace(".", "").lstrip("0")) <= 9
    assert "NaN" not in text and "Infinity" not in text


def test_dini_circle_symmetric(circle):
    rep = dini_report(circle, circle.arclength_samples(4), 0.01, 0.5, 32)
    assert np.ptp(rep.values) < 1e-6
    assert not rep.divergent.any()


def test_dini_straight_edge(slab):
    rep = dini_report(slab, [(0, 0), (1, 0)], 0.01, 0.5, 16)
    assert np.all(rep.values < 1e-12)
    assert not rep.divergent.any()


def test_dini_koch_corner_flagged():
    k = make_koch(4)
    rep = dini_report(k, [k.vertices[0]], 0.02, 0.25, 32)
    assert rep.divergent.all()
