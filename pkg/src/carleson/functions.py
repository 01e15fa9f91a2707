"""ε(x, r), β(x, r), bβ(x, r) and the Dini functional of ε²."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import trapezoid
from scipy.spatial import cKDTree

from .circle import decompose_circle
from .curve import JordanCurve, RegionLabel
from .errors import CenterNotOnBoundary, RadiusWarning

# r must exceed this many local edge lengths before values are trusted
RADIUS_GUARD = 8.0
# Γ∩B is sampled at spacing ≤ r / SAMPLE_DIVISOR for the bilateral distance
SAMPLE_DIVISOR = 256
BBETA_GRID = 256
BBETA_ANGLE_TOL = 1e-6
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_FINE_CANDIDATES = 16


@dataclass(frozen=True)
class GeomSample:
    center: tuple[float, float]
    radius: float
    epsilon: float
    beta: float
    bbeta: float


def _require_on_curve(curve: JordanCurve, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    d = float(curve.distance(x)[0])
    if d > curve.tolerance:
        raise CenterNotOnBoundary(
            f"center ({x[0]:.9g}, {x[1]:.9g}) is {d:.3g} from the curve (tolerance {curve.tolerance:.3g})")
    return x


def radius_is_coarse(curve: JordanCurve, x, r: float) -> bool:
    return r < RADIUS_GUARD * curve.local_spacing(x, r)


def _guard(curve, x, r, check_radius):
    if r <= 0:
        raise ValueError("radius must be positive")
    x = _require_on_curve(curve, x)
    if check_radius and radius_is_coarse(curve, x, r):
        warnings.warn(f"radius {r:.4g} is below {RADIUS_GUARD:g}x the local vertex spacing",
                      RadiusWarning, stacklevel=3)
    return x


# ε ----------------------------------------------------------------------

def epsilon(curve: JordanCurve, x, r: float, *, check_radius: bool = True) -> float:
    """Carleson's ε: defect of the largest Ω⁺ and Ω⁻ arcs from a half circle."""
    x = _guard(curve, x, r, check_radius)
    part = decompose_circle(curve, x, r)
    plus = max((a.span for a in part.arcs if a.side == RegionLabel.INSIDE_PLUS), default=0.0)
    minus = max((a.span for a in part.arcs if a.side == RegionLabel.OUTSIDE_MINUS), default=0.0)
    return max(abs(math.pi - plus), abs(math.pi - minus))


# β ----------------------------------------------------------------------

def convex_hull(points: np.ndarray) -> np.ndarray:
    """Andrew's monotone chain; counterclockwise, collinear points dropped."""
    pts = np.unique(np.asarray(points, dtype=float), axis=0)
    if len(pts) <= 2:
        return pts
    P = [tuple(p) for p in pts]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in P:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(P):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def ball_points(curve: JordanCurve, x, r: float) -> np.ndarray:
    """Endpoints of the pieces of Γ inside the closed ball.

    The distance to a fixed line is convex along each piece, so suprema over
    Γ∩B of such distances are attained on this finite set.
    """
    A, B = curve.clip_to_ball(x, r)
    return np.concatenate([A, B])


def _strip_widths(pts: np.ndarray, directions: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    normals = np.stack([-directions[:, 1], directions[:, 0]], axis=1)
    proj = pts @ normals.T
    hi, lo = proj.max(0), proj.min(0)
    return hi - lo, 0.5 * (hi + lo)


def candidate_directions(pts: np.ndarray) -> np.ndarray:
    """Unit directions to try: hull edges, the least-squares line, the extreme chord."""
    dirs = []
    hull = convex_hull(pts)
    if len(hull) >= 2:
        e = np.roll(hull, -1, axis=0) - hull
        dirs.append(e)
    centered = pts - pts.mean(0)
    if len(pts) >= 2:
        _, vecs = np.linalg.eigh(centered.T @ centered)
        dirs.append(vecs[:, 1][None, :])
        far = np.argmax((centered ** 2).sum(1))
        near = np.argmax(((pts - pts[far]) ** 2).sum(1))
        dirs.append((pts[near] - pts[far])[None, :])
    if not dirs:
        return np.array([[1.0, 0.0]])
    d = np.concatenate(dirs)
    n = np.hypot(d[:, 0], d[:, 1])
    d = d[n > 0] / n[n > 0, None]
    return d if len(d) else np.array([[1.0, 0.0]])


@dataclass(frozen=True)
class BetaLine:
    value: float
    point: np.ndarray
    direction: np.ndarray


def beta_line(curve: JordanCurve, x, r: float, *, check_radius: bool = True) -> BetaLine:
    """Jones β together with a line realising it."""
    x = _guard(curve, x, r, check_radius)
    pts = ball_points(curve, x, r) - x
    if len(pts) == 0:
        pts = np.zeros((1, 2))
    dirs = candidate_directions(pts)
    width, mid = _strip_widths(pts, dirs)
    k = int(np.argmin(width))
    u = dirs[k]
    normal = np.array([-u[1], u[0]])
    return BetaLine(0.5 * float(width[k]) / r, x + mid[k] * normal, u)


def beta(curve: JordanCurve, x, r: float, *, check_radius: bool = True) -> float:
    """Jones β: half the minimal strip width of Γ∩B(x, r), over r."""
    return beta_line(curve, x, r, check_radius=check_radius).value


# bβ ---------------------------------------------------------------------

class _BallSet:
    """Γ∩B(x, r) prepared for distance queries."""

    def __init__(self, curve: JordanCurve, x: np.ndarray, r: float):
        A, B = curve.clip_to_ball(x, r)
        if len(A) == 0:
            A = B = x[None, :]
        self.A = A - x
        self.B = B - x
        self.ends = np.concatenate([self.A, self.B])
        seg = self.B - self.A
        lens = np.hypot(seg[:, 0], seg[:, 1])
        counts = np.maximum(np.ceil(lens / (r / SAMPLE_DIVISOR)).astype(int), 1)
        owner = np.repeat(np.arange(len(A)), counts + 1)
        starts = np.repeat(np.cumsum(counts + 1) - (counts + 1), counts + 1)
        frac = (np.arange(owner.size) - starts) / np.repeat(counts, counts + 1)
        self.samples = self.A[owner] + frac[:, None] * seg[owner]
        self.owner = owner
        self.seg = seg
        self.len2 = np.where(lens > 0, lens ** 2, 1.0)
        self.spacing = float((lens / counts).max(initial=0.0))
        self.tree = cKDTree(self.samples)
        self.k = min(4, len(self.samples))

    def reference_angle(self) -> float:
        c = self.samples - self.samples.mean(0)
        _, vecs = np.linalg.eigh(c.T @ c)
        v = vecs[:, 1]
        return math.atan2(v[1], v[0]) % math.pi

    def distance(self, q: np.ndarray) -> np.ndarray:
        """Exact distance from each query point to the union of clipped pieces."""
        _, idx = self.tree.query(q, k=self.k)
        idx = idx.reshape(len(q), -1)
        segs = self.owner[idx]
        a = self.A[segs]
        d = self.seg[segs]
        rel = q[:, None, :] - a
        t = np.clip((rel * d).sum(-1) / self.len2[segs], 0.0, 1.0)
        diff = rel - t[..., None] * d
        return np.sqrt((diff ** 2).sum(-1).min(1))

    def row_max_distance(self, q: np.ndarray) -> np.ndarray:
        """max over each row of q (shape (m, k, 2)) of the exact distance.

        The nearest sample overestimates the distance by at most half the
        sample spacing, so only points whose sample distance reaches the
        row's lower bound need the exact computation.
        """
        m, k, _ = q.shape
        flat = q.reshape(-1, 2)
        ds, _ = self.tree.query(flat)
        ds = ds.reshape(m, k)
        lower = np.sqrt(np.maximum(ds ** 2 - (0.5 * self.spacing) ** 2, 0.0))
        cand = ds >= lower.max(1, keepdims=True)
        exact = np.full((m, k), -np.inf)
        exact[cand] = self.distance(q[cand])
        return exact.max(1)


def bilateral_cost(ballset: _BallSet, r: float, thetas: np.ndarray,
                   chord_samples: int = 2 * SAMPLE_DIVISOR + 1) -> np.ndarray:
    """D[Γ∩B, (L_θ + x)∩B] for each angle, with x at the origin."""
    thetas = np.atleast_1d(thetas)
    u = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)
    normals = np.stack([-u[:, 1], u[:, 0]], axis=1)
    # Γ∩B lies in the ball, so its distance to the diameter equals its distance to the line
    term1 = np.abs(ballset.ends @ normals.T).max(0)
    s = np.linspace(-r, r, chord_samples)
    q = s[None, :, None] * u[:, None, :]
    return term1 + ballset.row_max_distance(q)


def bilateral_beta(curve: JordanCurve, x, r: float, *, check_radius: bool = True,
                   grid: int = BBETA_GRID, angle_tol: float = BBETA_ANGLE_TOL) -> float:
    """Bilateral β: best two-sided fit of Γ∩B(x, r) by a diameter through x.

    Directions are scanned on a uniform grid anchored at the principal axis
    of Γ∩B, then the best grid cell is refined by golden-section search.
    """
    x = _guard(curve, x, r, check_radius)
    ballset = _BallSet(curve, x, r)
    ref = ballset.reference_angle()
    step = math.pi / grid
    thetas = ref + step * np.arange(grid)
    # coarse chord sampling shifts the cost by at most half its spacing
    coarse_n = 2 * (SAMPLE_DIVISOR // 4) + 1
    coarse = bilateral_cost(ballset, r, thetas, chord_samples=coarse_n)
    slack = 2.0 * r / (coarse_n - 1)
    order = np.argsort(coarse, kind="stable")
    order = order[coarse[order] <= coarse[order[0]] + slack][:_FINE_CANDIDATES]
    cost = bilateral_cost(ballset, r, thetas[order])
    k = int(order[int(np.argmin(cost))])
    best = float(cost.min())

    f = lambda th: float(bilateral_cost(ballset, r, np.array([th]))[0])  # noqa: E731
    a, b = thetas[k] - step, thetas[k] + step
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > angle_tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    best = min(best, fc, fd)
    return best / r


def geom_sample(curve: JordanCurve, x, r: float, *, check_radius: bool = True) -> GeomSample:
    x = np.asarray(x, dtype=float)
    return GeomSample((float(x[0]), float(x[1])), float(r),
                      epsilon(curve, x, r, check_radius=check_radius),
                      beta(curve, x, r, check_radius=check_radius),
                      bilateral_beta(curve, x, r, check_radius=check_radius))


# Dini -------------------------------------------------------------------

def dini_epsilon_sq(curve: JordanCurve | None, x, r_min: float, r_max: float, n_scales: int,
                    eps_fn: Callable[[float], float] | None = None) -> float:
    """Trapezoid estimate of ∫ ε(x, r)² dr/r over [r_min, r_max] on a log grid."""
    if not 0 < r_min < r_max:
        raise ValueError("need 0 < r_min < r_max")
    if n_scales < 2:
        raise ValueError("need at least two scales")
    radii = np.geomspace(r_min, r_max, n_scales)
    if eps_fn is None:
        eps_fn = lambda r: epsilon(curve, x, r, check_radius=False)  # noqa: E731
    vals = np.array([eps_fn(float(r)) for r in radii]) ** 2
    return float(trapezoid(vals, np.log(radii)))
