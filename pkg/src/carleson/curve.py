"""Closed polylines standing in for Jordan curves.

A :class:`JordanCurve` is an immutable, validated, counterclockwise simple
polygon. Ω⁺ is the bounded component it encloses, Ω⁻ the exterior. Every
query here is vectorised over the edge arrays; the per-edge bounding boxes
act as the spatial index for ball queries.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import numpy as np
import shapely

from .errors import (
    DegenerateEdge,
    NoConvergence,
    SameSideEndpoints,
    SelfIntersecting,
    TooFewVertices,
)

BOUNDARY_RTOL = 1e-9
ANGLE_MERGE_TOL = 1e-10
BISECTION_BUDGET = 80

# rows x edges per chunk in the dense point/edge kernels
_CHUNK = 1 << 22

TWO_PI = 2.0 * math.pi


class RegionLabel(enum.IntEnum):
    OUTSIDE_MINUS = -1
    ON_BOUNDARY = 0
    INSIDE_PLUS = 1


def _signed_area(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _diameter(v: np.ndarray) -> float:
    try:
        from scipy.spatial import ConvexHull

        pts = v[ConvexHull(v).vertices]
    except Exception:
        pts = v
    best = 0.0
    step = max(1, _CHUNK // max(len(pts), 1))
    for i in range(0, len(pts), step):
        d = pts[i:i + step, None, :] - pts[None, :, :]
        best = max(best, float(np.sqrt((d ** 2).sum(-1).max())))
    return best


def brute_force_simple(vertices: np.ndarray) -> bool:
    """O(n²) simplicity test; used on small inputs and as a test oracle."""
    v = np.asarray(vertices, dtype=float)
    n = len(v)
    p, q = v, np.roll(v, -1, axis=0)
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if _segments_touch(p[i], q[i], p[j], q[j], adjacent):
                return False
    return True


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_segment(a, b, c) -> bool:
    return (min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= c[1] <= max(a[1], b[1]))


def _segments_touch(p1, q1, p2, q2, adjacent: bool) -> bool:
    d1, d2 = _orient(p2, q2, p1), _orient(p2, q2, q1)
    d3, d4 = _orient(p1, q1, p2), _orient(p1, q1, q2)
    if adjacent:
        # adjacent edges share one vertex; they fail only by folding back
        # onto each other (collinear overlap)
        if d1 == 0 and d2 == 0:
            shared = q1 if np.array_equal(q1, p2) else p1
            other1 = p1 if shared is q1 else q1
            other2 = q2 if np.array_equal(shared, p2) else p2
            u, w = other1 - shared, other2 - shared
            return float(np.dot(u, w)) > 0
        return False
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 and d2 and d3 and d4:
        return True
    if d1 == 0 and _on_segment(p2, q2, p1):
        return True
    if d2 == 0 and _on_segment(p2, q2, q1):
        return True
    if d3 == 0 and _on_segment(p1, q1, p2):
        return True
    if d4 == 0 and _on_segment(p1, q1, q2):
        return True
    return False


@dataclass(frozen=True, eq=False)
class JordanCurve:
    """Validated counterclockwise simple closed polyline.

    Build through :func:`load_curve` or :meth:`from_vertices`; the
    constructor itself assumes its input is already valid.
    """

    vertices: np.ndarray
    name: str = ""
    meta: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        v = np.ascontiguousarray(self.vertices, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        p = v
        q = np.roll(v, -1, axis=0)
        d = q - p
        len2 = (d ** 2).sum(1)
        lengths = np.sqrt(len2)
        for name, arr in (("_p", p), ("_q", q), ("_d", d), ("_len2", len2),
                          ("_lengths", lengths)):
            arr = np.ascontiguousarray(arr)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "_lo", np.minimum(p, q))
        object.__setattr__(self, "_hi", np.maximum(p, q))
        cum = np.concatenate([[0.0], np.cumsum(lengths)])
        object.__setattr__(self, "_cum", cum)
        diam = _diameter(v)
        object.__setattr__(self, "diameter", diam)
        object.__setattr__(self, "tolerance", BOUNDARY_RTOL * diam)

    @classmethod
    def from_vertices(cls, vertices, name: str = "", meta=None) -> "JordanCurve":
        return load_curve({"vertices": np.asarray(vertices, dtype=float).tolist(),
                           "closed": True, "name": name, "meta": dict(meta or {})})

    # basic measurements -------------------------------------------------

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.vertices)

    @property
    def perimeter(self) -> float:
        return float(self._cum[-1])

    @property
    def area(self) -> float:
        return _signed_area(self.vertices)

    @property
    def edge_lengths(self) -> np.ndarray:
        return self._lengths

    def point_at(self, s) -> np.ndarray:
        """Point(s) at arc length ``s`` measured from vertex 0 (mod perimeter)."""
        s = np.mod(np.asarray(s, dtype=float), self.perimeter)
        idx = np.searchsorted(self._cum, s, side="right") - 1
        idx = np.clip(idx, 0, self.n_edges - 1)
        t = (s - self._cum[idx]) / self._lengths[idx]
        return self._p[idx] + t[..., None] * self._d[idx]

    def arclength_samples(self, k: int, window: tuple[float, float] | None = None) -> np.ndarray:
        """``k`` points evenly spaced in arc length.

        ``window`` restricts to a fraction interval ``(a, b)`` of the
        perimeter. Without a window, sample 0 is vertex 0.
        """
        if k < 1:
            raise ValueError("need at least one sample")
        if window is None:
            s = np.arange(k) * (self.perimeter / k)
        else:
            a, b = window
            s = (a + (np.arange(k) + 0.5) * (b - a) / k) * self.perimeter
        return self.point_at(s)

    # distances and labels ----------------------------------------------

    def distance(self, points) -> np.ndarray:
        """Euclidean distance from each point to the polyline."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.empty(len(pts))
        step = max(1, _CHUNK // self.n_edges)
        for i in range(0, len(pts), step):
            chunk = pts[i:i + step]
            rel = chunk[:, None, :] - self._p[None, :, :]
            t = np.clip((rel * self._d).sum(-1) / self._len2, 0.0, 1.0)
            diff = rel - t[..., None] * self._d
            out[i:i + step] = np.sqrt((diff ** 2).sum(-1).min(1))
        return out

    def labels(self, points) -> np.ndarray:
        """Vectorised :func:`point_in_domain`; returns an int array of labels."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.empty(len(pts), dtype=int)
        py, qy = self._p[:, 1], self._q[:, 1]
        px, dx, dy = self._p[:, 0], self._d[:, 0], self._d[:, 1]
        step = max(1, _CHUNK // self.n_edges)
        for i in range(0, len(pts), step):
            chunk = pts[i:i + step]
            x = chunk[:, 0:1]
            y = chunk[:, 1:2]
            straddle = (py > y) != (qy > y)
            with np.errstate(divide="ignore", invalid="ignore"):
                xint = px + (y - py) * dx / dy
            hits = (straddle & (x < xint)).sum(1)
            out[i:i + step] = np.where(hits % 2 == 1, RegionLabel.INSIDE_PLUS,
                                       RegionLabel.OUTSIDE_MINUS)
        on = self.distance(pts) <= self.tolerance
        out[on] = RegionLabel.ON_BOUNDARY
        return out

    def is_on_curve(self, point) -> bool:
        return bool(self.distance(point)[0] <= self.tolerance)

    # ball queries ---------------------------------------------------------

    def _near_edges(self, x, r) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        mask = np.all(self._lo <= x + r, axis=1) & np.all(self._hi >= x - r, axis=1)
        return np.flatnonzero(mask)

    def local_spacing(self, x, r) -> float:
        """Longest edge meeting the bounding box of B(x, r)."""
        idx = self._near_edges(x, r)
        if len(idx) == 0:
            return 0.0
        return float(self._lengths[idx].max())

    def circle_crossings(self, x, r) -> tuple[np.ndarray, np.ndarray]:
        """Transversal crossings of ∂B(x, r) with the polyline.

        Returns ``(angles, points)`` sorted by angle in [0, 2π). A vertex lying
        exactly on the circle is treated as infinitesimally outside it, so
        touching contacts produce either nothing or a coincident pair, and
        coincident pairs cancel.
        """
        x = np.asarray(x, dtype=float)
        r = float(r)
        idx = self._near_edges(x, r)
        if len(idx) == 0:
            return np.empty(0), np.empty((0, 2))
        p, q, d, a = self._p[idx], self._q[idx], self._d[idx], self._len2[idx]
        rel = p - x
        c = (rel ** 2).sum(1) - r * r
        cn = ((q - x) ** 2).sum(1) - r * r
        b = 2.0 * (rel * d).sum(1)
        in_s, in_e = c < 0, cn < 0
        disc = np.maximum(b * b - 4.0 * a * c, 0.0)
        sq = np.sqrt(disc)
        qq = -0.5 * (b + np.copysign(sq, b))
        with np.errstate(divide="ignore", invalid="ignore"):
            t1 = qq / a
            t2 = np.where(qq != 0, c / qq, t1)
        lo_t, hi_t = np.minimum(t1, t2), np.maximum(t1, t2)

        tstar = -b / (2.0 * a)
        fmin = c - b * b / (4.0 * a)
        out_in = ~in_s & in_e
        in_out = in_s & ~in_e
        dip = ~in_s & ~in_e & (tstar > 0) & (tstar < 1) & (fmin < 0)

        pts = []
        # entering: smaller root; leaving: larger root
        sel = np.flatnonzero(out_in)
        t = np.clip(lo_t[sel], 0.0, 1.0)
        pts.append(np.where((c[sel] == 0)[:, None], p[sel], p[sel] + t[:, None] * d[sel]))
        sel = np.flatnonzero(in_out)
        t = np.clip(hi_t[sel], 0.0, 1.0)
        pts.append(np.where((cn[sel] == 0)[:, None], q[sel], p[sel] + t[:, None] * d[sel]))
        sel = np.flatnonzero(dip)
        t = np.clip(lo_t[sel], 0.0, 1.0)
        pts.append(np.where((c[sel] == 0)[:, None], p[sel], p[sel] + t[:, None] * d[sel]))
        t = np.clip(hi_t[sel], 0.0, 1.0)
        pts.append(np.where((cn[sel] == 0)[:, None], q[sel], p[sel] + t[:, None] * d[sel]))
        pts = np.concatenate(pts)
        if len(pts) == 0:
            return np.empty(0), np.empty((0, 2))
        ang = np.mod(np.arctan2(pts[:, 1] - x[1], pts[:, 0] - x[0]), TWO_PI)
        ang[ang >= TWO_PI] = 0.0
        order = np.argsort(ang, kind="stable")
        ang, pts = ang[order], pts[order]
        keep = _cancel_coincident(ang)
        return ang[keep], pts[keep]

    def clip_to_ball(self, x, r) -> tuple[np.ndarray, np.ndarray]:
        """Pieces of the polyline inside the closed ball B(x, r).

        Returns endpoint arrays ``(A, B)`` of shape (k, 2).
        """
        x = np.asarray(x, dtype=float)
        r = float(r)
        idx = self._near_edges(x, r)
        if len(idx) == 0:
            return np.empty((0, 2)), np.empty((0, 2))
        p, q, d, a = self._p[idx], self._q[idx], self._d[idx], self._len2[idx]
        rel = p - x
        c = (rel ** 2).sum(1) - r * r
        b = 2.0 * (rel * d).sum(1)
        disc = b * b - 4.0 * a * c
        ok = disc > 0
        sq = np.sqrt(np.where(ok, disc, 0.0))
        t1 = (-b - sq) / (2.0 * a)
        t2 = (-b + sq) / (2.0 * a)
        lo = np.maximum(t1, 0.0)
        hi = np.minimum(t2, 1.0)
        ok &= lo <= hi
        lo, hi = lo[ok], hi[ok]
        p, q, d = p[ok], q[ok], d[ok]
        A = np.where((lo == 0.0)[:, None], p, p + lo[:, None] * d)
        B = np.where((hi == 1.0)[:, None], q, p + hi[:, None] * d)
        return A, B

    def segment_intersections(self, a, b) -> np.ndarray:
        """Parameters s ∈ [0, 1] where segment ab meets the polyline."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        e = b - a
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        mask = np.all(self._lo <= hi, axis=1) & np.all(self._hi >= lo, axis=1)
        idx = np.flatnonzero(mask)
        p, d = self._p[idx], self._d[idx]
        den = e[0] * d[:, 1] - e[1] * d[:, 0]
        w = p - a
        with np.errstate(divide="ignore", invalid="ignore"):
            s = (w[:, 0] * d[:, 1] - w[:, 1] * d[:, 0]) / den
            t = (w[:, 0] * e[1] - w[:, 1] * e[0]) / den
        good = (den != 0) & (s >= 0) & (s <= 1) & (t >= 0) & (t <= 1)
        return np.sort(s[good])

    # misc -------------------------------------------------------------

    def transformed(self, rotation: float = 0.0, translation=(0.0, 0.0),
                    scale: float = 1.0) -> "JordanCurve":
        """Image under p ↦ scale·R(rotation)·p + translation."""
        return JordanCurve(apply_similarity(self.vertices, rotation, translation, scale),
                           self.name, dict(self.meta))

    def to_document(self) -> dict:
        doc = {"name": self.name, "closed": True, "vertices": self.vertices.tolist()}
        if self.meta:
            doc["meta"] = dict(self.meta)
        return doc


def apply_similarity(points, rotation: float = 0.0, translation=(0.0, 0.0),
                     scale: float = 1.0) -> np.ndarray:
    c, s = math.cos(rotation), math.sin(rotation)
    R = np.array([[c, -s], [s, c]])
    return scale * (np.asarray(points, dtype=float) @ R.T) + np.asarray(translation, dtype=float)


def _cancel_coincident(ang: np.ndarray) -> np.ndarray:
    """Indices surviving pairwise cancellation of coincident sorted angles."""
    stack: list[int] = []
    for i, a in enumerate(ang):
        if stack and a - ang[stack[-1]] < ANGLE_MERGE_TOL:
            stack.pop()
        else:
            stack.append(i)
    while len(stack) >= 2 and ang[stack[0]] + TWO_PI - ang[stack[-1]] < ANGLE_MERGE_TOL:
        stack.pop()
        stack.pop(0)
    return np.asarray(stack, dtype=int)


def load_curve(document) -> JordanCurve:
    """Validate a curve document (mapping, JSON string, or path).

    Reorients clockwise input, keeping vertex 0 first. A trailing vertex equal
    to the first is dropped.
    """
    if isinstance(document, (str, Path)) and not str(document).lstrip().startswith("{"):
        document = json.loads(Path(document).read_text())
    elif isinstance(document, str):
        document = json.loads(document)
    if not document.get("closed", True):
        raise ValueError("curve document must be closed")
    v = np.asarray(document["vertices"], dtype=float)
    if v.ndim != 2 or v.shape[1] != 2:
        raise TooFewVertices("vertices must be a list of [x, y] pairs")
    if len(v) > 1 and np.array_equal(v[0], v[-1]):
        v = v[:-1]
    if len(v) < 3:
        raise TooFewVertices(f"need at least 3 vertices, got {len(v)}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vertices must be finite")
    seg = np.roll(v, -1, axis=0) - v
    zero = np.flatnonzero((seg == 0).all(1))
    if len(zero):
        raise DegenerateEdge(f"zero-length edge at vertex {int(zero[0])}")
    if len(v) <= 64:
        simple = brute_force_simple(v)
    else:
        simple = bool(shapely.LinearRing(v).is_simple)
    if not simple:
        raise SelfIntersecting("polyline is not simple")
    area = _signed_area(v)
    if area == 0:
        raise SelfIntersecting("polyline encloses no area")
    if area < 0:
        v = np.concatenate([v[:1], v[:0:-1]])
    return JordanCurve(v, str(document.get("name") or ""), dict(document.get("meta") or {}))


def save_curve(curve: JordanCurve, path) -> None:
    Path(path).write_text(json.dumps(curve.to_document()))


def point_in_domain(curve: JordanCurve, p) -> RegionLabel:
    return RegionLabel(int(curve.labels(np.asarray(p, dtype=float)[None, :])[0]))


def circle_curve_crossings(curve: JordanCurve, x, r: float) -> np.ndarray:
    if r <= 0:
        raise ValueError("radius must be positive")
    return curve.circle_crossings(x, r)[0]


def segment_boundary_crossing(curve: JordanCurve, a, b) -> np.ndarray:
    """Bisect segment ab down to a point within boundary tolerance of Γ."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    la, lb = curve.labels(np.stack([a, b]))
    if la == RegionLabel.ON_BOUNDARY:
        return a.copy()
    if lb == RegionLabel.ON_BOUNDARY:
        return b.copy()
    if la == lb:
        raise SameSideEndpoints("segment endpoints lie on the same side of the curve")
    for _ in range(BISECTION_BUDGET):
        m = 0.5 * (a + b)
        lm = curve.labels(m[None, :])[0]
        if lm == RegionLabel.ON_BOUNDARY:
            return m
        if lm == la:
            a = m
        else:
            b = m
    raise NoConvergence(f"bisection did not reach tolerance {curve.tolerance:.3g}")
