"""Batch evaluation over (center, radius) grids, power-law fits and reports."""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.stats import linregress

from .constructions import flatness_certificate
from .curve import JordanCurve
from .errors import CarlesonError, InsufficientData, ScaleGuardViolation
from .functions import beta, bilateral_beta, epsilon, radius_is_coarse

CSV_HEADER = ("center_index", "center_x", "center_y", "radius", "epsilon", "beta", "bbeta",
              "status")
COLUMNS = ("epsilon", "beta", "bbeta")
ZERO_FLOOR = 1e-12
GOOD_STATUS = ("ok", "coarse")


@dataclass(frozen=True)
class GridRow:
    center_index: int
    center_x: float
    center_y: float
    radius: float
    epsilon: float
    beta: float
    bbeta: float
    status: str


@dataclass(frozen=True)
class SampleGrid:
    centers: np.ndarray
    radii: np.ndarray
    rows: tuple[GridRow, ...]

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    def table(self, name: str) -> np.ndarray:
        """Values as a (center, radius) array."""
        return self.column(name).reshape(len(self.centers), len(self.radii))


_FUNCTIONS = {"epsilon": epsilon, "beta": beta, "bbeta": bilateral_beta}


def _evaluate_cell(curve: JordanCurve, i: int, x: np.ndarray, r: float,
                   columns: Sequence[str] = COLUMNS) -> GridRow:
    try:
        e, b, bb = (_FUNCTIONS[c](curve, x, r, check_radius=False) if c in columns
                    else math.nan for c in COLUMNS)
        status = "coarse" if radius_is_coarse(curve, x, r) else "ok"
    except CarlesonError as exc:
        e = b = bb = math.nan
        status = type(exc).__name__
    return GridRow(i, float(x[0]), float(x[1]), float(r), e, b, bb, status)


def sample_grid(curve: JordanCurve, n_centers: int, r_min: float, r_max: float, n_radii: int,
                window: tuple[float, float] | None = None, centers=None,
                threads: int = 1, columns: Sequence[str] = COLUMNS) -> SampleGrid:
    """ε, β and bβ at every (center, radius) pair.

    Centers are evenly spaced in arc length (optionally inside a perimeter
    window) unless given explicitly. Cell failures are recorded in the
    status column. Rows come back center-major whatever ``threads`` is.
    Functions left out of ``columns`` are recorded as NaN.
    """
    if not set(columns) <= set(COLUMNS):
        raise ValueError(f"columns must be drawn from {COLUMNS}")
    if not 0 < r_min < r_max:
        raise ValueError("need 0 < r_min < r_max")
    if r_max > curve.diameter / 4 * (1 + 1e-12):
        raise ScaleGuardViolation(f"r_max = {r_max:g} exceeds diameter/4 = "
                                  f"{curve.diameter / 4:g}")
    if n_radii < 2:
        raise ValueError("need at least two radii")
    if centers is None:
        if n_centers < 1:
            raise ValueError("need at least one center")
        centers = curve.arclength_samples(n_centers, window)
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    radii = np.geomspace(r_min, r_max, n_radii)
    cells = [(i, c, float(r), columns) for i, c in enumerate(centers) for r in radii]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            rows = list(pool.map(lambda a: _evaluate_cell(curve, *a), cells))
    else:
        rows = [_evaluate_cell(curve, *a) for a in cells]
    return SampleGrid(centers, radii, tuple(rows))


# fitting -----------------------------------------------------------------

@dataclass(frozen=True)
class DecayFit:
    """v(r) ≈ C_hat·r^alpha_hat.

    ``C_sup`` is the smallest constant with v ≤ C_sup·r^alpha_hat on every
    fitted point. A fit with more than half its values below 1e-12 is
    reported as flat and carries no exponent.
    """

    C_hat: float
    alpha_hat: float | None
    r_squared: float
    n_points: int
    envelope: bool
    C_sup: float
    n_excluded: int
    flat: bool = False

    def to_document(self) -> dict:
        return {k: _sig(v) for k, v in self.__dict__.items()}


def _rows_of(data) -> Sequence[GridRow]:
    return data.rows if isinstance(data, SampleGrid) else data


def fit_power_law(r, v) -> tuple[float, float, float]:
    """Least squares on (log r, log v); returns (C, alpha, R²)."""
    lr, lv = np.log(np.asarray(r, float)), np.log(np.asarray(v, float))
    res = linregress(lr, lv)
    r2 = res.rvalue ** 2 if np.ptp(lv) > 0 else 1.0
    return float(math.exp(res.intercept)), float(res.slope), float(r2)


def fit_decay(data, column: str = "epsilon", envelope: bool = True) -> DecayFit:
    """Fit a power law to one column of a grid (or of rows read from CSV)."""
    if column not in COLUMNS:
        raise ValueError(f"column must be one of {COLUMNS}")
    rows = [row for row in _rows_of(data) if row.status in GOOD_STATUS]
    r = np.array([row.radius for row in rows])
    v = np.array([getattr(row, column) for row in rows])
    if envelope:
        radii = np.unique(r)
        v = np.array([v[r == x].max() for x in radii])
        r = radii
    if len(np.unique(r)) < 3:
        raise InsufficientData(f"{len(np.unique(r))} radii available, need 3")
    keep = v >= ZERO_FLOOR
    n_excluded = int((~keep).sum())
    if n_excluded > 0.5 * len(v):
        return DecayFit(0.0, None, 1.0, int(keep.sum()), envelope,
                        float(v.max(initial=0.0)), n_excluded, flat=True)
    r, v = r[keep], v[keep]
    if len(np.unique(r)) < 3:
        raise InsufficientData("fewer than 3 radii with positive values")
    C, alpha, r2 = fit_power_law(r, v)
    C_sup = float(np.max(v / r ** alpha))
    return DecayFit(C, alpha, r2, len(v), envelope, C_sup, n_excluded)


# CSV -----------------------------------------------------------------------

def write_csv(grid: SampleGrid | Iterable[GridRow], path) -> None:
    """Write rows to a path or an open text file; floats keep full precision."""
    if hasattr(path, "write"):
        _write_rows(grid, path)
    else:
        with open(path, "w", newline="") as fh:
            _write_rows(grid, fh)


def _write_rows(grid, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in _rows_of(grid):
        # repr round-trips floats exactly
        w.writerow([row.center_index, repr(row.center_x), repr(row.center_y),
                    repr(row.radius), repr(row.epsilon), repr(row.beta), repr(row.bbeta),
                    row.status])


def read_csv(path) -> list[GridRow]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if tuple(header or ()) != CSV_HEADER:
            raise InsufficientData(f"{path}: unexpected header {header}")
        return [GridRow(int(a), float(b), float(c), float(d), float(e), float(f), float(g), h)
                for a, b, c, d, e, f, g, h in reader]


# verification --------------------------------------------------------------

@dataclass(frozen=True)
class VerifyConfig:
    r_min: float
    r_max: float
    n_centers: int = 16
    n_radii: int = 12
    window: tuple[float, float] | None = None
    centers: np.ndarray | None = None
    threads: int = 1
    beta_slack: float = 0.05
    certificate_slack: float = 0.1
    r2_min: float = 0.8
    bbeta_drop: float = 0.2
    alpha_min: float = 0.1


@dataclass
class TheoremReport:
    epsilon_fit: DecayFit
    beta_fit: DecayFit
    radii: np.ndarray
    bbeta_sup: np.ndarray
    certificates: np.ndarray
    certificate_fit: DecayFit
    hypothesis: bool
    pass_flags: dict[str, bool] = field(default_factory=dict)

    @property
    def status(self) -> str:
        if not self.hypothesis:
            return "hypothesis-not-satisfied"
        return "pass" if all(self.pass_flags.values()) else "theorem-violated"

    @property
    def bbeta_drop(self) -> float:
        return 1.0 - self.bbeta_sup[0] / self.bbeta_sup[-1]

    def to_document(self) -> dict:
        return {
            "status": self.status,
            "hypothesis": self.hypothesis,
            "pass_flags": dict(self.pass_flags),
            "epsilon_fit": self.epsilon_fit.to_document(),
            "beta_fit": self.beta_fit.to_document(),
            "certificate_fit": self.certificate_fit.to_document(),
            "radii": [_sig(x) for x in self.radii],
            "bbeta_sup": [_sig(x) for x in self.bbeta_sup],
            "bbeta_drop": _sig(self.bbeta_drop),
            "certificates": [_sig(x) for x in self.certificates],
        }


def _sig(x):
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    return None if not math.isfinite(x) else float(f"{x:.9g}")


def _exponent_at_least(fit: DecayFit, bound: float) -> bool:
    return fit.flat or fit.alpha_hat >= bound


def verify_theorem(curve: JordanCurve, config: VerifyConfig) -> TheoremReport:
    """Check the decay relations that a power-law ε hypothesis should imply.

    (i) the β envelope exponent is at least α̂/16 minus a slack; (ii) the
    flatness certificates divided by r decay at least like r^{α̂/2}, up to a
    slack, with a decent fit; (iii) the per-radius sup of bβ drops by more
    than ``bbeta_drop`` from the largest radius to the smallest.
    """
    grid = sample_grid(curve, config.n_centers, config.r_min, config.r_max, config.n_radii,
                       window=config.window, centers=config.centers, threads=config.threads)
    eps_fit = fit_decay(grid, "epsilon")
    beta_fit = fit_decay(grid, "beta")
    ok = np.isin(grid.column("status"), GOOD_STATUS).reshape(len(grid.centers), -1)
    bb = np.where(ok, grid.table("bbeta"), -np.inf)
    bbeta_sup = bb.max(0)

    certs = np.full((len(grid.centers), len(grid.radii)), np.nan)
    for i, c in enumerate(grid.centers):
        for j, r in enumerate(grid.radii):
            try:
                certs[i, j] = flatness_certificate(curve, c, r).value / r
            except CarlesonError:
                pass
    cert_env = np.nanmax(certs, axis=0)
    cert_rows = [GridRow(0, 0.0, 0.0, float(r), float(v), 0.0, 0.0, "ok")
                 for r, v in zip(grid.radii, cert_env) if math.isfinite(v)]
    cert_fit = fit_decay(cert_rows, "epsilon")

    if eps_fit.flat:
        hypothesis, alpha = True, 1.0
    else:
        alpha = eps_fit.alpha_hat
        hypothesis = alpha >= config.alpha_min and eps_fit.r_squared >= config.r2_min
    flags = {
        "beta_exponent": _exponent_at_least(beta_fit, alpha / 16 - config.beta_slack),
        "certificate_exponent": _exponent_at_least(
            cert_fit, alpha / 2 - config.certificate_slack)
        and (cert_fit.flat or cert_fit.r_squared >= config.r2_min),
        "bbeta_vanishing": bool(1.0 - bbeta_sup[0] / bbeta_sup[-1] > config.bbeta_drop)
        if bbeta_sup[-1] > ZERO_FLOOR else True,
    }
    return TheoremReport(eps_fit, beta_fit, grid.radii, bbeta_sup, cert_env * grid.radii,
                         cert_fit, bool(hypothesis), flags)


# Dini --------------------------------------------------------------------------

@dataclass(frozen=True)
class DiniReport:
    centers: np.ndarray
    values: np.ndarray
    tail_fraction: np.ndarray  # share of each integral from the lower half of log r
    divergent: np.ndarray

    def to_document(self) -> dict:
        return {"centers": self.centers.tolist(),
                "values": [_sig(v) for v in self.values],
                "tail_fraction": [_sig(v) for v in self.tail_fraction],
                "divergent": [bool(d) for d in self.divergent]}


def dini_report(curve: JordanCurve, centers, r_min: float, r_max: float, n: int,
                tail_threshold: float = 0.25) -> DiniReport:
    """∫ ε² dr/r per center, flagged divergent when the small-radius half still carries
    more than ``tail_threshold`` of the total."""
    if not 0 < r_min < r_max or n < 4:
        raise ValueError("need 0 < r_min < r_max and n >= 4")
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    radii = np.geomspace(r_min, r_max, n)
    lr = np.log(radii)
    values, tails = [], []
    for c in centers:
        e2 = np.array([epsilon(curve, c, float(r), check_radius=False) for r in radii]) ** 2
        partial = cumulative_trapezoid(e2, lr, initial=0.0)
        total = float(partial[-1])
        half = float(np.interp(0.5 * (lr[0] + lr[-1]), lr, partial))
        values.append(total)
        tails.append(half / total if total > ZERO_FLOOR else 0.0)
    tails = np.array(tails)
    return DiniReport(centers, np.array(values), tails, tails > tail_threshold)
