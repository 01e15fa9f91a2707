"""Multiscale flatness analysis of planar Jordan curves.

Carleson's ε, Jones' β and the bilateral β, arc decompositions of circles
about boundary points, the half-scale triangle tree, and a small experiment
harness for fitting power-law decay of these quantities.
"""

from .circle import CirclePartition, LabeledArc, decompose_circle, largest_arcs, shortest_arc_between
from .constructions import (
    DecayHypothesis,
    TriangleTree,
    TrappedVerdict,
    build_triangle_tree,
    dyadic_point,
    flatness_certificate,
    half_scale_step,
    lambda_fn,
    line_choice_spread,
    s_address,
    trapped_boundary_check,
    verify_dyadic_scales,
)
from .curve import JordanCurve, RegionLabel, load_curve, point_in_domain, save_curve
from .functions import beta, beta_line, bilateral_beta, dini_epsilon_sq, epsilon, geom_sample
from .zoo import CurveSpec, make_c1gamma_graph, make_circle, make_exponential_spiral, make_koch, make_polygon

__all__ = [
    "CirclePartition", "CurveSpec", "DecayHypothesis", "JordanCurve", "LabeledArc",
    "RegionLabel", "TrappedVerdict", "TriangleTree", "beta", "beta_line", "bilateral_beta",
    "build_triangle_tree", "decompose_circle", "dini_epsilon_sq", "dyadic_point", "epsilon",
    "flatness_certificate", "geom_sample", "half_scale_step", "lambda_fn", "largest_arcs",
    "line_choice_spread", "load_curve", "make_c1gamma_graph", "make_circle",
    "make_exponential_spiral", "make_koch", "make_polygon", "point_in_domain", "s_address",
    "save_curve", "shortest_arc_between", "trapped_boundary_check", "verify_dyadic_scales",
]
