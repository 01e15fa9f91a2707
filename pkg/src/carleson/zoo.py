"""Deterministic generators for synthetic Jordan curves."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .curve import JordanCurve, load_curve
from .errors import NotSimple

FAMILIES = ("circle", "polygon", "graph", "spiral", "koch")

# default spiral: radius 0.002·exp(0.003·θ) with θ in degrees
SPIRAL_GROWTH = 0.003 * 180.0 / math.pi
SPIRAL_SCALE = 0.002


@dataclass(frozen=True)
class CurveSpec:
    family: str
    parameters: dict[str, Any] = field(default_factory=dict)
    resolution: int = 4096
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family not in ("polygon", "koch") and self.resolution < 16:
            raise ValueError("resolution must be at least 16")

    def build(self) -> JordanCurve:
        p = self.parameters
        if self.family == "circle":
            return make_circle(p.get("radius", 1.0), self.resolution)
        if self.family == "graph":
            return make_c1gamma_graph(p.get("gamma", 0.5), p.get("amplitude", 0.02),
                                      self.resolution, self.seed)
        if self.family == "spiral":
            return make_exponential_spiral(p.get("growth", SPIRAL_GROWTH), p.get("turns", 6),
                                           self.resolution, p.get("scale", SPIRAL_SCALE))
        if self.family == "koch":
            return make_koch(p.get("level", 5))
        return make_polygon(p["vertices"])


def make_circle(R: float, n: int) -> JordanCurve:
    """Regular n-gon inscribed in the circle of radius R about the origin."""
    if R <= 0 or n < 16:
        raise ValueError("need R > 0 and n >= 16")
    th = 2.0 * math.pi * np.arange(n) / n
    v = R * np.stack([np.cos(th), np.sin(th)], axis=1)
    return JordanCurve.from_vertices(v, name=f"circle(R={R:g},n={n})")


def lacunary_graph(t, gamma: float, amplitude: float, n: int, seed: int):
    """f(t) = A Σ_j a_j 2^{-j(1+γ)} sin(2^j t + φ_j), j = 1..log2(n) - 4."""
    J = max(int(math.log2(n)) - 4, 1)
    rng = np.random.default_rng(seed)
    signs = rng.choice([-1.0, 1.0], size=J)
    phases = rng.uniform(0.0, 2.0 * math.pi, size=J)
    t = np.asarray(t, dtype=float)
    f = np.zeros_like(t)
    for j in range(1, J + 1):
        f += signs[j - 1] * 2.0 ** (-j * (1 + gamma)) * np.sin(2.0 ** j * t + phases[j - 1])
    return amplitude * f


def make_c1gamma_graph(gamma: float, amplitude: float, n: int, seed: int = 0,
                       depth: float = math.pi) -> JordanCurve:
    """Graph of a C^{1,γ} lacunary series over [0, 2π], closed by a box below.

    Ω⁺ lies under the graph. ``meta['window']`` is the perimeter fraction
    covering t ∈ [π/2, 3π/2], far from the box corners.
    """
    if not 0 < gamma < 1:
        raise ValueError("gamma must lie in (0, 1)")
    if amplitude < 0 or amplitude > 0.05:
        raise NotSimple("amplitude must lie in [0, 0.05] for the graph to close simply")
    if n < 16:
        raise ValueError("need n >= 16")
    t = np.linspace(2.0 * math.pi, 0.0, n)
    top = np.stack([t, lacunary_graph(t, gamma, amplitude, n, seed)], axis=1)
    v = np.concatenate([top, [[0.0, -depth], [2.0 * math.pi, -depth]]])
    curve = JordanCurve.from_vertices(
        v, name=f"graph(gamma={gamma:g},A={amplitude:g},n={n},seed={seed})")
    cum = curve._cum
    lo = np.searchsorted(-t, -1.5 * math.pi)
    hi = np.searchsorted(-t, -0.5 * math.pi)
    window = (float(cum[lo] / curve.perimeter), float(cum[hi] / curve.perimeter))
    meta = {"family": "graph", "gamma": gamma, "amplitude": amplitude, "seed": seed,
            "window": list(window)}
    return JordanCurve(curve.vertices, curve.name, meta)


def make_exponential_spiral(growth: float = SPIRAL_GROWTH, turns: int = 6, n: int = 1 << 14,
                            scale: float = SPIRAL_SCALE) -> JordanCurve:
    """Two exponential arms r = c·e^{bθ}, the second rotated by π.

    The inner ends are joined by a segment through the origin (a vertex of
    the curve, recorded in ``meta['center']``); the outer ends by a half-turn
    arc at the outermost radius. Ω⁺ is the channel between the arms.
    """
    if turns < 2:
        raise ValueError("need at least two turns")
    if n < 64 * turns:
        raise ValueError("need n >= 64 * turns")
    if growth <= 0:
        raise ValueError("growth must be positive")
    theta_max = 2.0 * math.pi * turns
    m_arm = (n - 2) * 4 // 9
    m_arc = n - 1 - 2 * m_arm
    th = np.linspace(0.0, theta_max, m_arm)
    rad = scale * np.exp(growth * th)
    arm_a = np.stack([rad * np.cos(th), rad * np.sin(th)], axis=1)
    arm_b = -arm_a
    R = rad[-1]
    phi = theta_max + np.linspace(0.0, math.pi, m_arc + 2)[1:-1]
    arc = R * np.stack([np.cos(phi), np.sin(phi)], axis=1)
    # origin, arm A outward, outer arc, arm B inward
    v = np.concatenate([[[0.0, 0.0]], arm_a, arc, arm_b[::-1]])
    meta = {"family": "spiral", "growth": growth, "turns": turns, "scale": scale,
            "center": [0.0, 0.0], "r_inner": float(scale), "r_outer": float(R)}
    return JordanCurve.from_vertices(v, name=f"spiral(b={growth:.6g},turns={turns},n={n})",
                                     meta=meta)


def koch_vertices(level: int, side: float = 1.0) -> np.ndarray:
    h = side * math.sqrt(3.0) / 2.0
    v = np.array([[-side / 2, -h / 3], [side / 2, -h / 3], [0.0, 2 * h / 3]])
    rot = np.array([[0.5, math.sqrt(3.0) / 2], [-math.sqrt(3.0) / 2, 0.5]])  # -60°
    for _ in range(level):
        p = v
        d = (np.roll(v, -1, axis=0) - v) / 3.0
        a = p + d
        # bump points outward, i.e. to the right of a counterclockwise edge
        b = a + d @ rot.T
        c = p + 2 * d
        v = np.stack([p, a, b, c], axis=1).reshape(-1, 2)
    return v


def make_koch(level: int, side: float = 1.0) -> JordanCurve:
    """Koch snowflake prefractal, counterclockwise."""
    if not 1 <= level <= 7:
        raise ValueError("level must lie in 1..7")
    return JordanCurve.from_vertices(koch_vertices(level, side), name=f"koch(level={level})",
                                     meta={"family": "koch", "level": level, "side": side})


def make_polygon(vertices, name: str = "polygon") -> JordanCurve:
    return load_curve({"vertices": np.asarray(vertices, dtype=float).tolist(),
                       "closed": True, "name": name})


def l_shape() -> JordanCurve:
    return make_polygon([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)], name="L")
