"""Constructive multiscale machinery on a curve with decaying ε.

Covers the trapped-boundary test on circles about boundary points, the
spread of good approximating lines, the half-scale apex search, the dyadic
triangle tree built from it, line addresses S(k, n, m), and the checks
comparing dyadic points of the base segment with tree vertices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .circle import shortest_arc_between
from .curve import TWO_PI, JordanCurve, RegionLabel, segment_boundary_crossing
from .functions import _BallSet
from .errors import (
    ConstructionError,
    DepthTooShallow,
    IndexOutOfRange,
    NoCrossings,
    NumericError,
    SameSideApexCandidates,
    ScaleGuardViolation,
)

SQRT3_2 = math.sqrt(3.0) / 2.0


@dataclass(frozen=True)
class DecayHypothesis:
    """ε(x, r) ≤ C0·r^alpha for all x on the curve and r ≤ r0."""

    C0: float
    alpha: float
    r0: float = math.inf

    def __post_init__(self):
        # α ≥ 1 is allowed: fitted exponents of smooth curves land near 1
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if self.C0 <= 0 or self.r0 <= 0:
            raise ValueError("C0 and r0 must be positive")

    @property
    def C1(self) -> float:
        return 2.0 * self.C0 + 2.0 * self.C0 ** 2

    def short_arc_bound(self, t: float) -> float:
        return 2.0 * self.C0 * t ** (self.alpha + 1)

    def half_arc_bound(self, t: float) -> float:
        return math.pi * t - self.C0 * t ** (self.alpha + 1)


def _line_angle(u) -> float:
    return math.atan2(u[1], u[0]) % math.pi


def angle_between_lines(u, v) -> float:
    """Angle in [0, π/2] between the lines spanned by u and v."""
    d = abs(_line_angle(u) - _line_angle(v))
    return min(d, math.pi - d)


# trapped boundary -----------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    v: tuple[float, float]
    w: tuple[float, float]
    arc_length: float
    interval: str  # "short", "half" or "none"


@dataclass(frozen=True)
class TrappedVerdict:
    holds: bool
    witness_pairs: tuple[Witness, ...]

    @property
    def violations(self) -> tuple[Witness, ...]:
        return tuple(w for w in self.witness_pairs if w.interval == "none")


def trapped_boundary_check(curve: JordanCurve, x, t: float,
                           hyp: DecayHypothesis) -> TrappedVerdict:
    """Check every pair of crossings of ∂B(x, t) against the two admissible arc ranges."""
    if t > hyp.r0:
        raise ScaleGuardViolation(f"t = {t:g} exceeds r0 = {hyp.r0:g}")
    x = np.asarray(x, dtype=float)
    _, pts = curve.circle_crossings(x, t)
    short = hyp.short_arc_bound(t)
    half = hyp.half_arc_bound(t)
    slack = 1e-12 * t
    witnesses = []
    for i, j in combinations(range(len(pts)), 2):
        arc = shortest_arc_between(x, t, pts[i], pts[j])
        if arc <= short + slack:
            kind = "short"
        elif arc >= half - slack:
            kind = "half"
        else:
            kind = "none"
        witnesses.append(Witness(tuple(pts[i]), tuple(pts[j]), arc, kind))
    return TrappedVerdict(all(w.interval != "none" for w in witnesses), tuple(witnesses))


def line_choice_spread(curve: JordanCurve, x0, t: float) -> float:
    """Largest angle between good approximating lines L_t(x0, y), y on ∂B(x0, t)∩Γ."""
    x0 = np.asarray(x0, dtype=float)
    _, pts = curve.circle_crossings(x0, t)
    if len(pts) == 0:
        raise NoCrossings(f"∂B(x0, {t:g}) does not meet the curve")
    angles = np.mod(np.arctan2(pts[:, 1] - x0[1], pts[:, 0] - x0[0]), math.pi)
    d = np.abs(angles[:, None] - angles[None, :])
    return float(np.minimum(d, math.pi - d).max())


def first_crossing(curve: JordanCurve, x0, s: float) -> np.ndarray:
    """Crossing of ∂B(x0, s) with the smallest angle from the +x direction."""
    ang, pts = curve.circle_crossings(np.asarray(x0, dtype=float), s)
    if len(pts) == 0:
        raise NoCrossings(f"∂B(x0, {s:g}) does not meet the curve")
    return pts[0]


# half scales ----------------------------------------------------------------

@dataclass(frozen=True)
class HalfScaleStep:
    z: np.ndarray
    s1: float
    dist_to_midpoint: float
    angle: float


def scale_guard(curve: JordanCurve, hyp: DecayHypothesis | None = None) -> float:
    bound = curve.diameter / 10.0
    if hyp is not None:
        bound = min(bound, hyp.r0)
    return bound


def half_scale_step(curve: JordanCurve, x0, y, hyp: DecayHypothesis | None = None,
                    guard: bool = True) -> HalfScaleStep:
    """Boundary point on the perpendicular bisector of x0y, between the apexes a and b.

    a and b are the two intersections of ∂B(x0, s0) and ∂B(y, s0), with a to
    the left of x0→y. If several boundary points lie on ab, the one nearest
    the midpoint of x0y wins.
    """
    x0 = np.asarray(x0, dtype=float)
    y = np.asarray(y, dtype=float)
    e = y - x0
    s0 = math.hypot(*e)
    if guard and s0 > scale_guard(curve, hyp) * (1 + 1e-12):
        raise ScaleGuardViolation(f"s0 = {s0:g} exceeds the construction scale guard")
    mid = 0.5 * (x0 + y)
    normal = np.array([-e[1], e[0]]) / s0
    a = mid + SQRT3_2 * s0 * normal
    b = mid - SQRT3_2 * s0 * normal
    la, lb = curve.labels(np.stack([a, b]))
    if la == lb or RegionLabel.ON_BOUNDARY in (la, lb):
        raise SameSideApexCandidates(
            f"apex candidates carry labels {RegionLabel(la).name}/{RegionLabel(lb).name}")
    s = curve.segment_intersections(a, b)
    if len(s):
        # ab passes through the midpoint at parameter 1/2
        z = a + s[int(np.argmin(np.abs(s - 0.5)))] * (b - a)
    else:
        z = segment_boundary_crossing(curve, a, b)
    s1 = float(math.hypot(*(z - x0)))
    return HalfScaleStep(z, s1, float(math.hypot(*(z - mid))), angle_between_lines(e, z - x0))


# triangle tree ----------------------------------------------------------------

@dataclass(frozen=True)
class TriangleRecord:
    level: int
    index: int  # odd j: the apex z_k^j
    side: float  # |z_k^{j-1} - z_k^j|
    side_other: float  # |z_k^j - z_k^{j+1}|
    base: float  # |z_k^{j-1} - z_k^{j+1}|
    base_angle: float
    deviation: float  # distance from the apex to the midpoint of the base

    @property
    def half_base_excess(self) -> float:
        return abs(self.side - 0.5 * self.base)


@dataclass
class TriangleTree:
    base_x0: np.ndarray
    base_y: np.ndarray
    s0: float
    levels: list[np.ndarray]
    records: list[list[TriangleRecord]] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def side_lengths(self, k: int) -> np.ndarray:
        return np.array([r.side for r in self.records[k - 1]])

    def base_angles(self, k: int) -> np.ndarray:
        return np.array([r.base_angle for r in self.records[k - 1]])

    def max_side(self, k: int) -> float:
        """Longest segment |z_k^{j} - z_k^{j+1}| at level k."""
        if k == 0:
            return self.s0
        d = np.diff(self.levels[k], axis=0)
        return float(np.hypot(d[:, 0], d[:, 1]).max())

    def to_document(self) -> dict:
        return {
            "x0": self.base_x0.tolist(),
            "y": self.base_y.tolist(),
            "s0": self.s0,
            "depth": self.depth,
            "levels": [lvl.tolist() for lvl in self.levels],
            "triangles": [
                {"level": r.level, "index": r.index, "side": r.side,
                 "side_other": r.side_other, "base": r.base,
                 "base_angle": r.base_angle, "deviation": r.deviation}
                for recs in self.records for r in recs
            ],
        }


def build_triangle_tree(curve: JordanCurve, x0, s0: float, K: int,
                        hyp: DecayHypothesis | None = None) -> TriangleTree:
    """Levels 0..K of boundary points z_k^j, refining every segment by a half-scale step."""
    if K < 1:
        raise ValueError("depth must be at least 1")
    x0 = np.asarray(x0, dtype=float)
    if s0 > scale_guard(curve, hyp) * (1 + 1e-12):
        raise ScaleGuardViolation(f"s0 = {s0:g} exceeds the construction scale guard "
                                  f"{scale_guard(curve, hyp):g}")
    y = first_crossing(curve, x0, s0)
    levels = [np.stack([x0, y])]
    records: list[list[TriangleRecord]] = []
    for k in range(1, K + 1):
        prev = levels[-1]
        new = np.empty((2 * (len(prev) - 1) + 1, 2))
        new[0::2] = prev
        recs = []
        for j in range(len(prev) - 1):
            p, q = prev[j], prev[j + 1]
            try:
                step = half_scale_step(curve, p, q, guard=False)
            except NumericError as exc:
                raise ConstructionError(str(exc), k, 2 * j + 1) from exc
            new[2 * j + 1] = step.z
            recs.append(TriangleRecord(
                level=k, index=2 * j + 1, side=step.s1,
                side_other=float(math.hypot(*(q - step.z))),
                base=float(math.hypot(*(q - p))), base_angle=step.angle,
                deviation=step.dist_to_midpoint))
        levels.append(new)
        records.append(recs)
    return TriangleTree(x0, y, float(math.hypot(*(y - x0))), levels, records)


# dyadic arithmetic ------------------------------------------------------------

def dyadic_point(p, q, m: int, n: int) -> np.ndarray:
    """x_m^n of segment pq: the point at fraction n/2^m from p."""
    if m < 0 or not 0 <= n <= 2 ** m:
        raise IndexOutOfRange(f"n = {n} outside 0..2^{m}")
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return p + (n / 2 ** m) * (q - p)


def lambda_fn(m: int, i: int, n: int) -> int:
    """Which side (0 left, 1 right) carries the tracked dyadic point at step i."""
    if not 0 <= i < m:
        raise IndexOutOfRange(f"i = {i} outside 0..{m - 1}")
    if not 1 <= n <= 2 ** m - 1:
        raise IndexOutOfRange(f"n = {n} outside 1..2^{m}-1")
    return 0 if n % 2 ** (m - i) <= 2 ** (m - i - 1) else 1


def s_address(k: int, n: int, m: int) -> int:
    """S(k, n, m) = Σ_{i<k} 2^{k-i-1} λ(m, i)."""
    if not 0 <= k <= m - 1:
        raise IndexOutOfRange(f"k = {k} outside 0..{m - 1}")
    if not 1 <= n <= 2 ** m - 1:
        raise IndexOutOfRange(f"n = {n} outside 1..2^{m}-1")
    return sum(2 ** (k - i - 1) * lambda_fn(m, i, n) for i in range(k))


@dataclass(frozen=True)
class DyadicReport:
    m: int
    alpha: float
    s0: float
    deviations: dict[int, float]  # odd n -> |x_m^n(L_0^0) - z_m^n|
    chain_deviation: float  # max over n, k of |x_m^n(L_0^0) - x_{m-k}^{[n]}(L_k^{S(k,n,m)})|
    max_deviation: float
    C_hat: float
    bound: float | None
    passed: bool | None
    addresses_consistent: bool


def verify_dyadic_scales(curve: JordanCurve | None, tree: TriangleTree, m: int,
                         hyp: DecayHypothesis | None = None, C: float | None = None,
                         alpha: float | None = None) -> DyadicReport:
    """Compare dyadic points of the base segment with level-m tree vertices.

    The tree vertex for odd n is reached by following line addresses:
    z_m^n is the apex over L_{m-1}^{S(m-1, n, m)}. Ĉ normalises the worst
    deviation by s0^{α/2+1}; ``C`` (if given) is the bound to test against.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if tree.depth < m:
        raise DepthTooShallow(f"tree depth {tree.depth} < m = {m}")
    if alpha is None:
        alpha = hyp.alpha if hyp is not None else 0.5
    z00, z01 = tree.levels[0]
    devs: dict[int, float] = {}
    chain = 0.0
    consistent = True
    for n in range(1, 2 ** m, 2):
        x_mn = dyadic_point(z00, z01, m, n)
        S = s_address(m - 1, n, m)
        consistent &= S == (n - 1) // 2
        z = tree.levels[m][2 * S + 1]
        devs[n] = float(math.hypot(*(x_mn - z)))
        for k in range(0, m):
            Sk = s_address(k, n, m)
            side = tree.levels[k]
            pt = dyadic_point(side[Sk], side[Sk + 1], m - k, n % 2 ** (m - k))
            chain = max(chain, float(math.hypot(*(x_mn - pt))))
    max_dev = max(devs.values())
    scale = tree.s0 ** (alpha / 2 + 1)
    C_hat = max_dev / scale
    bound = None if C is None else C * scale
    passed = None if C is None else max_dev <= bound
    return DyadicReport(m, alpha, tree.s0, devs, chain, max_dev, C_hat, bound, passed,
                        bool(consistent))


# flatness certificate ---------------------------------------------------------

@dataclass(frozen=True)
class FlatnessCertificate:
    value: float  # max(forward, reflected), or max(forward, backward) with one crossing
    forward: float  # half of L_0 from x0 towards y
    backward: float  # half of L_0 from x0 away from y
    reflected: float | None  # half of L_0' from x0 towards y'
    x0: np.ndarray
    y: np.ndarray
    direction: np.ndarray
    y_prime: np.ndarray | None


def flatness_certificate(curve: JordanCurve, x0, r: float,
                         n_samples: int = 1025) -> FlatnessCertificate:
    """Sup distance from the good approximating line's diameter to Γ∩B(x0, r).

    L_0 passes through x0 and the first crossing y of ∂B(x0, r). The half
    of the ball behind x0 is covered by L_0', the segment from x0 to the
    crossing y' closest to antipodal from y; the certificate is the larger
    of the two half-segment gaps. The plain backward half of L_0 is kept
    for comparison.
    """
    x0 = np.asarray(x0, dtype=float)
    ang, pts = curve.circle_crossings(x0, r)
    if len(pts) == 0:
        raise NoCrossings(f"∂B(x0, {r:g}) does not meet the curve")
    y = pts[0]
    u = (y - x0) / math.hypot(*(y - x0))
    ballset = _BallSet(curve, x0, r)
    s = np.linspace(-r, r, n_samples)
    dist = ballset.distance(s[:, None] * u)
    forward = float(dist[s >= 0].max())
    backward = float(dist[s <= 0].max())
    reflected = None
    y_prime = None
    if len(pts) >= 2:
        sep = np.abs(np.mod(ang[1:] - ang[0] + math.pi, TWO_PI) - math.pi)
        j = 1 + int(np.argmax(sep))
        y_prime = pts[j]
        u2 = (y_prime - x0) / math.hypot(*(y_prime - x0))
        s2 = np.linspace(0.0, r, n_samples // 2 + 1)
        reflected = float(ballset.distance(s2[:, None] * u2).max())
    value = max(forward, backward if reflected is None else reflected)
    return FlatnessCertificate(value, forward, backward, reflected,
                               x0, y, u, y_prime)
