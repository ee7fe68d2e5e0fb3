"""``varbesov`` command line.

Every subcommand assembles a one-experiment scenario from its flags and runs
it through the scenario runner, so flags and scenario files share one
validation path.  The report goes to stdout as JSON (or CSV for item
tables); ``--out-dir`` also writes the report files.
"""
from __future__ import annotations

import argparse
import json
import sys

from .scenario import ScenarioError, _items_csv, load_scenario, report_json, run_scenario

__all__ = ["build_parser", "main"]


def _global_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("grid and output")
    g.add_argument("--grid-n", type=int, default=None, help="samples per axis N")
    g.add_argument("--box", type=float, default=None, help="half-width L of the box [-L, L)^n")
    g.add_argument("--dim", type=int, default=None, choices=(1, 2), help="dimension n")
    g.add_argument("--jmax", type=int, default=None, help="highest level J")
    g.add_argument("--tol", type=float, default=None,
                   help="relative stability tolerance for seed/refinement comparisons")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--out-dir", default=None, help="write report files here")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--plots", action="store_true", help="write SVG ratio plots (needs matplotlib)")


def _space_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("space parameters (expressions)")
    g.add_argument("--p", default="2 + 0.5*sin(x)")
    g.add_argument("--q", default="2 + 0.5*cos(x)")
    g.add_argument("--s", default="1 + 0.25*sin(x)")
    g.add_argument("--weights", default=None, help="w_j expression in j, x, (y,) r; replaces --s")
    g.add_argument("--tau", type=float, default=0.1, help="phi(Q) = |Q|^tau")
    g.add_argument("--phi", default=None, help="phi expression in centre x (y) and side r")
    g.add_argument("--family", choices=("B", "F"), default="B")


def _pair_flags(p: argparse.ArgumentParser, prefix: str = "") -> None:
    p.add_argument(f"--{prefix}pair", choices=("admissible", "shifted", "local-means"),
                   default="admissible")
    p.add_argument("--shift", type=float, default=0.3, help="translation of the shifted pair")
    p.add_argument("--d", type=float, default=3.0, help="local means support factor")
    p.add_argument("--moments", type=int, default=2, help="local means moment order N")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="varbesov",
        description="Variable-exponent Besov/Triebel-Lizorkin type norms, "
                    "inequality experiments and atoms on a grid.")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check-exponent", help="bounds and log-Hoelder estimates of an exponent")
    c.add_argument("expr")
    c.add_argument("--g-inf", type=float, default=None, help="limit at infinity")
    _global_flags(c)

    c = sub.add_parser("norm", help="space norm of a function")
    c.add_argument("f")
    c.add_argument("--variant", choices=("convolution", "peetre"), default="convolution")
    c.add_argument("--a", type=float, default=None, help="Peetre exponent")
    _pair_flags(c)
    _space_flags(c)
    _global_flags(c)

    c = sub.add_parser("equiv", help="kernel equivalence over the canonical family")
    c.add_argument("--pair-a", choices=("admissible", "shifted", "local-means"),
                   default="admissible")
    c.add_argument("--pair-b", choices=("admissible", "shifted", "local-means"),
                   default="local-means")
    c.add_argument("--shift", type=float, default=0.3)
    c.add_argument("--d", type=float, default=3.0)
    c.add_argument("--moments", type=int, default=2)
    c.add_argument("--count", type=int, default=None, help="use the first COUNT functions")
    c.add_argument("--no-refine", action="store_true")
    _space_flags(c)
    _global_flags(c)

    c = sub.add_parser("ineq", help="convolution inequality experiments")
    c.add_argument("kind", choices=("eta", "discrete"))
    c.add_argument("--R", type=float, default=None)
    c.add_argument("--D1", type=float, default=1.0)
    c.add_argument("--D2", type=float, default=None)
    c.add_argument("--trials", type=int, default=100)
    _space_flags(c)
    _global_flags(c)

    c = sub.add_parser("atoms", help="atom validation, synthesis and round trips")
    c.add_argument("mode", choices=("validate", "synthesize", "roundtrip"))
    c.add_argument("--K", type=float, default=2)
    c.add_argument("--L", type=float, default=1)
    c.add_argument("--cube", action="append", default=None, metavar="J:K1[,K2]",
                   help="cube for validation, repeatable")
    c.add_argument("--trials", type=int, default=10)
    c.add_argument("--levels", type=int, default=4)
    c.add_argument("--f", default="exp(-x^2)", help="function for the round trip")
    c.add_argument("--moments", type=int, default=2)
    _space_flags(c)
    _global_flags(c)

    c = sub.add_parser("multiplier", help="pointwise multiplier ratio")
    c.add_argument("phim")
    c.add_argument("--rho", type=float, required=True)
    c.add_argument("--f", default=None, help="one function instead of the canonical family")
    _space_flags(c)
    _global_flags(c)

    c = sub.add_parser("scenario", help="run a JSON scenario file")
    c.add_argument("path")
    _global_flags(c)
    return parser


def _base(args) -> dict:
    box = {"n": args.dim or 1, "L": args.box if args.box is not None else 8.0,
           "N": args.grid_n or 512}
    sc = {"name": args.command, "seed": args.seed or 0, "box": box, "J": args.jmax}
    if hasattr(args, "family"):
        sc.update(family=args.family, p=args.p, q=args.q)
        if args.weights:
            sc["weights"] = args.weights
        else:
            sc["s"] = args.s
        sc["phi"] = {"expr": args.phi} if args.phi else {"tau": args.tau}
    return sc


def _experiment(args) -> dict:
    tol = {} if args.tol is None else {"max_change": args.tol}
    cmd = args.command
    if cmd == "check-exponent":
        e = {"type": "check-exponent", "expr": args.expr}
        if args.g_inf is not None:
            e["g_inf"] = args.g_inf
        return e
    if cmd == "norm":
        return {"type": "norm", "f": args.f, "pair": args.pair, "variant": args.variant,
                "a": args.a, "shift": args.shift, "d": args.d, "N": args.moments}
    if cmd == "equiv":
        e = {"type": "equiv", "pair_a": args.pair_a, "pair_b": args.pair_b, "shift": args.shift,
             "d": args.d, "N": args.moments, "refine": not args.no_refine, **tol}
        if args.count:
            e["count"] = args.count
        return e
    if cmd == "ineq":
        if args.kind == "eta":
            return {"type": "eta", "R": args.R, "trials": args.trials, **tol}
        return {"type": "discrete", "D1": args.D1, "D2": args.D2, "trials": args.trials, **tol}
    if cmd == "atoms":
        e = {"type": "atoms", "mode": args.mode, "K": args.K, "L": args.L,
             "trials": args.trials, "levels": args.levels, "f": args.f, "N": args.moments}
        if args.cube:
            cubes = []
            for spec in args.cube:
                j, ks = spec.split(":")
                cubes.append([int(j), [int(v) for v in ks.split(",")]])
            e["cubes"] = cubes
        return e
    if cmd == "multiplier":
        e = {"type": "multiplier", "phim": args.phim, "rho": args.rho}
        if args.f:
            e["f"] = args.f
        return e
    raise AssertionError(cmd)


def _emit(report: dict, fmt: str) -> None:
    if fmt == "csv":
        items = [it for r in report["experiments"] for it in r["result"].get("items", [])]
        if items:
            sys.stdout.write(_items_csv(items))
            return
        rows = [{"index": r["index"], "type": r["type"], "passed": r["passed"]}
                for r in report["experiments"]]
        sys.stdout.write(_items_csv(rows))
        return
    sys.stdout.write(report_json(report) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "scenario":
            with open(args.path, encoding="utf-8") as fh:
                data = json.load(fh)
            box = dict(data.get("box", {}))
            for key, flag in (("N", args.grid_n), ("L", args.box), ("n", args.dim)):
                if flag is not None:
                    box[key] = flag
            if box:
                data["box"] = box
            if args.jmax is not None:
                data["J"] = args.jmax
            if args.seed is not None:
                data["seed"] = args.seed
            if args.tol is not None:
                for e in data.get("experiments", []):
                    e.setdefault("max_change", args.tol)
        else:
            data = _base(args)
            data["experiments"] = [_experiment(args)]
        sc = load_scenario(data)
    except (ScenarioError, OSError, json.JSONDecodeError) as err:
        print(f"varbesov: error: {err}", file=sys.stderr)
        return 2
    code, report = run_scenario(sc, args.out_dir, plots=args.plots)
    _emit(report, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
