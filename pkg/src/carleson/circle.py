"""Arc decomposition of circles against a Jordan curve.

∂B(x, r) minus the curve splits into maximal open arcs, each lying in Ω⁺ or
Ω⁻. The longest arc on each side gives I⁺(x, r) and I⁻(x, r).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curve import TWO_PI, JordanCurve, RegionLabel
from .errors import MidpointOnBoundary, PointNotOnCircle

# arc fractions probed when the midpoint is within tolerance of the curve
_PROBES = (0.5, 0.25, 0.75, 1 / 3, 2 / 3, 0.1, 0.9)


@dataclass(frozen=True)
class LabeledArc:
    start_angle: float
    end_angle: float  # may exceed 2π when the arc wraps past angle 0
    side: RegionLabel
    radius: float

    @property
    def span(self) -> float:
        return self.end_angle - self.start_angle

    @property
    def length(self) -> float:
        return self.span * self.radius

    @property
    def mid_angle(self) -> float:
        return math.fmod(0.5 * (self.start_angle + self.end_angle), TWO_PI)


@dataclass(frozen=True)
class CirclePartition:
    center: np.ndarray
    radius: float
    arcs: tuple[LabeledArc, ...]
    crossings: np.ndarray
    crossing_points: np.ndarray

    @property
    def total_length(self) -> float:
        return math.fsum(a.length for a in self.arcs)


def decompose_circle(curve: JordanCurve, x, r: float) -> CirclePartition:
    """Split ∂B(x, r) at its crossings with the curve and label each arc."""
    if r <= 0:
        raise ValueError("radius must be positive")
    x = np.asarray(x, dtype=float)
    angles, points = curve.circle_crossings(x, r)
    if len(angles) == 0:
        starts = np.array([0.0])
        ends = np.array([TWO_PI])
    else:
        starts = angles
        ends = np.append(angles[1:], angles[0] + TWO_PI)
    sides = _label_arcs(curve, x, r, starts, ends)
    arcs = tuple(LabeledArc(float(s), float(e), RegionLabel(int(lab)), float(r))
                 for s, e, lab in zip(starts, ends, sides))
    return CirclePartition(x, float(r), arcs, angles, points)


def _label_arcs(curve, x, r, starts, ends) -> np.ndarray:
    span = ends - starts
    sides = np.full(len(starts), RegionLabel.ON_BOUNDARY, dtype=int)
    pending = np.arange(len(starts))
    for frac in _PROBES:
        if len(pending) == 0:
            break
        th = starts[pending] + frac * span[pending]
        pts = x + r * np.stack([np.cos(th), np.sin(th)], axis=1)
        lab = curve.labels(pts)
        sides[pending] = lab
        pending = pending[lab == RegionLabel.ON_BOUNDARY]
    if len(pending):
        i = int(pending[0])
        raise MidpointOnBoundary(
            f"arc [{starts[i]:.6g}, {ends[i]:.6g}] of circle r={r:.6g} sits on the "
            "curve; discretisation too coarse for this radius")
    return sides


def largest_arcs(partition: CirclePartition) -> tuple[float, float]:
    """(H¹(I⁺), H¹(I⁻)); a side with no arc contributes 0."""
    plus = max((a.length for a in partition.arcs if a.side == RegionLabel.INSIDE_PLUS),
               default=0.0)
    minus = max((a.length for a in partition.arcs if a.side == RegionLabel.OUTSIDE_MINUS),
                default=0.0)
    return plus, minus


def shortest_arc_between(x, t: float, v, w, rtol: float = 1e-7) -> float:
    """Length of the shorter arc of ∂B(x, t) joining v and w."""
    x = np.asarray(x, dtype=float)
    u1 = np.asarray(v, dtype=float) - x
    u2 = np.asarray(w, dtype=float) - x
    for u in (u1, u2):
        if abs(math.hypot(*u) - t) > rtol * t:
            raise PointNotOnCircle(f"|p - x| = {math.hypot(*u):.12g} differs from t = {t:.12g}")
    cross = u1[0] * u2[1] - u1[1] * u2[0]
    dot = u1[0] * u2[0] + u1[1] * u2[1]
    return t * math.atan2(abs(cross), dot)
