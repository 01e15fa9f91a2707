"""Command-line entry point.

Exit codes: 0 success, 1 bad input, 2 numerical failure, 3 a verification
ran but did not pass.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

import numpy as np

from . import analysis, constructions, functions, zoo
from .curve import JordanCurve, load_curve, save_curve
from .errors import InputError, NumericError

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3


def _point(text: str) -> np.ndarray:
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}") from None
    return np.array([x, y])


def _points(text: str) -> np.ndarray:
    return np.array([_point(p) for p in text.split(";") if p.strip()])


def _window(text: str):
    if text == "full":
        return "full"
    a, b = (float(v) for v in text.split(","))
    return (a, b)


def _emit(doc, out) -> None:
    text = json.dumps(doc, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _resolve_window(curve: JordanCurve, arg):
    if arg == "full":
        return None
    if arg is not None:
        return arg
    w = curve.meta.get("window")
    return tuple(w) if w else None


def _center(curve: JordanCurve, arg) -> np.ndarray:
    if arg is not None:
        return arg
    if "center" in curve.meta:
        return np.asarray(curve.meta["center"], dtype=float)
    return curve.vertices[0]


# subcommands -----------------------------------------------------------------

def cmd_gen(args) -> int:
    if args.family == "circle":
        curve = zoo.make_circle(args.radius, args.n)
    elif args.family == "graph":
        curve = zoo.make_c1gamma_graph(args.gamma, args.amplitude, args.n, args.seed)
    elif args.family == "spiral":
        curve = zoo.make_exponential_spiral(args.growth, args.turns, args.n, args.scale)
    elif args.family == "koch":
        curve = zoo.make_koch(args.level, args.side)
    else:
        curve = zoo.make_polygon(args.vertices, name=args.name)
    if args.output:
        save_curve(curve, args.output)
    else:
        print(json.dumps(curve.to_document()))
    return EXIT_OK


def cmd_value(args) -> int:
    curve = load_curve(args.curve)
    fn = {"epsilon": functions.epsilon, "beta": functions.beta,
          "bbeta": functions.bilateral_beta}[args.command]
    with warnings.catch_warnings():
        warnings.simplefilter("always")
        value = fn(curve, _center(curve, args.x), args.r, check_radius=not args.no_radius_check)
    print(f"{value:.9g}")
    return EXIT_OK


def cmd_grid(args) -> int:
    curve = load_curve(args.curve)
    grid = analysis.sample_grid(curve, args.centers, args.rmin, args.rmax, args.radii,
                                window=_resolve_window(curve, args.window),
                                threads=args.threads)
    analysis.write_csv(grid, args.output or sys.stdout)
    return EXIT_OK


def cmd_fit(args) -> int:
    rows = analysis.read_csv(args.csv)
    fit = analysis.fit_decay(rows, args.column, envelope=args.envelope)
    _emit({"column": args.column, **fit.to_document()}, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    curve = load_curve(args.curve)
    config = analysis.VerifyConfig(args.rmin, args.rmax, n_centers=args.centers,
                                   n_radii=args.radii,
                                   window=_resolve_window(curve, args.window),
                                   threads=args.threads)
    report = analysis.verify_theorem(curve, config)
    _emit(report.to_document(), args.output)
    return EXIT_OK if report.status == "pass" else EXIT_VERIFY


def cmd_tree(args) -> int:
    curve = load_curve(args.curve)
    tree = constructions.build_triangle_tree(curve, _center(curve, args.x), args.s0, args.depth)
    _emit(tree.to_document(), args.output)
    return EXIT_OK


def cmd_dyadic(args) -> int:
    curve = load_curve(args.curve)
    depth = args.depth if args.depth is not None else args.m
    tree = constructions.build_triangle_tree(curve, _center(curve, args.x), args.s0, depth)
    rep = constructions.verify_dyadic_scales(curve, tree, args.m, C=args.C, alpha=args.alpha)
    doc = {"m": rep.m, "alpha": rep.alpha, "s0": rep.s0, "max_deviation": rep.max_deviation,
           "C_hat": rep.C_hat, "chain_deviation": rep.chain_deviation,
           "addresses_consistent": rep.addresses_consistent, "bound": rep.bound,
           "passed": rep.passed}
    _emit({k: analysis._sig(v) for k, v in doc.items()}, args.output)
    return EXIT_VERIFY if rep.passed is False else EXIT_OK


def cmd_dini(args) -> int:
    curve = load_curve(args.curve)
    if args.x is not None:
        centers = args.x
    else:
        centers = curve.arclength_samples(args.centers, _resolve_window(curve, args.window))
    rep = analysis.dini_report(curve, centers, args.rmin, args.rmax, args.n)
    _emit(rep.to_document(), args.output)
    return EXIT_OK


# parser ----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not argparse's default status 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="carleson", description="Multiscale flatness of planar Jordan curves.")
    sub = p.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic curve document")
    fam = gen.add_subparsers(dest="family", required=True)
    g = fam.add_parser("circle")
    g.add_argument("--radius", type=float, default=1.0)
    g.add_argument("--n", type=int, default=4096)
    g = fam.add_parser("graph")
    g.add_argument("--gamma", type=float, default=0.5)
    g.add_argument("--amplitude", type=float, default=0.02)
    g.add_argument("--n", type=int, default=1 << 14)
    g.add_argument("--seed", type=int, default=0)
    g = fam.add_parser("spiral")
    g.add_argument("--growth", type=float, default=zoo.SPIRAL_GROWTH)
    g.add_argument("--turns", type=int, default=6)
    g.add_argument("--n", type=int, default=1 << 14)
    g.add_argument("--scale", type=float, default=zoo.SPIRAL_SCALE)
    g = fam.add_parser("koch")
    g.add_argument("--level", type=int, default=5)
    g.add_argument("--side", type=float, default=1.0)
    g = fam.add_parser("polygon")
    g.add_argument("--vertices", type=_points, required=True, help="'x,y;x,y;...'")
    g.add_argument("--name", default="polygon")
    for g in fam.choices.values():
        g.add_argument("-o", "--output")
        g.set_defaults(func=cmd_gen)

    for name in ("epsilon", "beta", "bbeta"):
        s = sub.add_parser(name, help=f"evaluate {name} at one center and radius")
        s.add_argument("curve")
        s.add_argument("--x", type=_point, help="center on the curve (default: meta center "
                                               "or vertex 0)")
        s.add_argument("--r", type=float, required=True)
        s.add_argument("--no-radius-check", action="store_true")
        s.set_defaults(func=cmd_value)

    def grid_args(s, centers=16):
        s.add_argument("curve")
        s.add_argument("--rmin", type=float, required=True)
        s.add_argument("--rmax", type=float, required=True)
        s.add_argument("--centers", type=int, default=centers)
        s.add_argument("--radii", type=int, default=12)
        s.add_argument("--window", type=_window,
                       help="perimeter fractions 'a,b', or 'full'; default from curve meta")
        s.add_argument("--threads", type=int, default=1)
        s.add_argument("-o", "--output")

    s = sub.add_parser("grid", help="sample ε, β, bβ over centers and radii to CSV")
    grid_args(s)
    s.set_defaults(func=cmd_grid)

    s = sub.add_parser("fit", help="power-law fit of one CSV column")
    s.add_argument("csv")
    s.add_argument("--column", choices=analysis.COLUMNS, default="epsilon")
    s.add_argument("--envelope", action=argparse.BooleanOptionalAction, default=True)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("verify", help="check the decay implications on a grid")
    grid_args(s)
    s.set_defaults(func=cmd_verify)

    for name, func in (("tree", cmd_tree), ("dyadic-verify", cmd_dyadic)):
        s = sub.add_parser(name)
        s.add_argument("curve")
        s.add_argument("--x", type=_point)
        s.add_argument("--s0", type=float, required=True)
        s.add_argument("-o", "--output")
        s.set_defaults(func=func)
        if name == "tree":
            s.add_argument("--depth", type=int, default=6)
        else:
            s.add_argument("--m", type=int, required=True)
            s.add_argument("--depth", type=int)
            s.add_argument("--alpha", type=float, default=0.5)
            s.add_argument("--C", type=float)

    s = sub.add_parser("dini", help="∫ ε² dr/r per center")
    s.add_argument("curve")
    s.add_argument("--x", type=_points, help="explicit centers 'x,y;x,y'")
    s.add_argument("--centers", type=int, default=8)
    s.add_argument("--window", type=_window)
    s.add_argument("--rmin", type=float, required=True)
    s.add_argument("--rmax", type=float, required=True)
    s.add_argument("--n", type=int, default=64)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_dini)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
