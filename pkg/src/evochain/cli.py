"""Command-line front end.

Every subcommand prints one JSON report to stdout (or a plain-text rendering
with --format text); diagrams additionally write their CSV, and optionally a
PNG, to files.  Exit codes: 0 success, 1 property-check failure (a CK
residual over tolerance, or an oracle disagreement), 2 usage or input error.
Identical argv produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import chains, report
from ._roots import points_match
from .algebra import EvolutionAlgebra, read_matrix
from .baric import classify_trivial, weight_functions
from .chains import LIMIT_MATRICES, TimeFunction, build_family
from .errors import EvaluationDomainError, InputError
from .idempotent import idempotent_critical_time, idempotent_oracle, idempotents_example2
from .nilpotent import nilpotent_analysis
from .rotation2d import density_search, iso_rotation
from .transitions import (
    DiagramProperty,
    baric_fraction,
    baric_times,
    critical_times_p1,
    diagram,
    explinear_controller,
    sin_controller,
    tan_controller,
    write_diagram_csv,
)

_PROPERTY_MAP = {
    "baric": DiagramProperty.BARIC,
    "nilpotent-unique": DiagramProperty.NILPOTENT_UNIQUE,
    "idempotent-count": DiagramProperty.IDEMPOTENT_COUNT,
}


def _add_family_flags(sp):
    sp.add_argument("--family", help="catalog family: example1, example2, two_state, rotation, constant_row, theorem5")
    sp.add_argument("--family-file", help="JSON family spec file (required for triangular)")
    sp.add_argument("--A", type=float, help="example1 rate parameter")
    sp.add_argument("--lambda", dest="lam", type=float, help="lambda parameter")
    sp.add_argument("--mu", type=float, help="mu parameter")
    sp.add_argument("--phi", help="time function, e.g. exp:2, const:1")
    sp.add_argument("--psi", help="time function, e.g. linear:0.5, sin")
    sp.add_argument("--g", help="time function for theorem5")
    sp.add_argument("--n", type=int, help="dimension for constant_row")


def _family_from_args(args, parser):
    if args.family_file:
        with open(args.family_file, encoding="utf-8") as fh:
            spec = json.load(fh)
        return build_family(spec)
    name = args.family
    if not name:
        parser.error("one of --family or --family-file is required")

    def need(flag, value):
        if value is None:
            parser.error(f"--family {name} requires {flag}")
        return value

    def tf(flag, value):
        return TimeFunction.parse(need(flag, value))

    if name == "example1":
        return chains.example1(need("--A", args.A))
    if name == "example2":
        return chains.example2(need("--lambda", args.lam), need("--mu", args.mu))
    if name == "two_state":
        return chains.two_state(tf("--phi", args.phi), tf("--psi", args.psi))
    if name == "rotation":
        return chains.rotation()
    if name == "constant_row":
        return chains.constant_row(tf("--phi", args.phi), need("--n", args.n))
    if name == "theorem5":
        return chains.theorem5(tf("--psi", args.psi), tf("--g", args.g))
    if name == "triangular":
        parser.error("--family triangular needs --family-file (entries are time functions)")
    parser.error(f"--family: unknown family {name!r}")


def _points_list(points: np.ndarray):
    return [[float(v) for v in row] for row in points]


def _cmd_verify_ck(args, parser):
    fam = _family_from_args(args, parser)
    rep = chains.verify_ck(fam, args.tmax, args.samples, args.seed, args.tol)
    payload = {
        "family": fam.variant,
        "t_max": float(args.tmax),
        "n_samples": rep.n_samples,
        "seed": rep.seed,
        "tol": rep.tol,
        "max_residual": rep.max_residual,
        "worst_triple": list(rep.worst_triple),
        "pass": rep.passed,
    }
    return payload, (0 if rep.passed else 1)


def _cmd_analyze(args, parser):
    if args.matrix:
        alg = EvolutionAlgebra(read_matrix(args.matrix))
        source = {"matrix": args.matrix}
    else:
        fam = _family_from_args(args, parser)
        if args.s is None or args.t is None:
            parser.error("analyze with --family requires --s and --t")
        alg = fam.snapshot(args.s, args.t)
        source = {"family": fam.variant, "s": float(args.s), "t": float(args.t)}
    payload = {"property": args.property, **source, "eps": args.tol}
    if args.property == "baric":
        wfs = weight_functions(alg, eps=args.tol)
        payload["baric"] = bool(wfs)
        payload["weight_functions"] = [{"index": w.index, "coefficient": w.coefficient} for w in wfs]
    elif args.property == "nilpotent":
        res = nilpotent_analysis(alg, eps=args.tol)
        payload["kind"] = res.kind.value
        payload["det"] = res.det
        payload["rank"] = res.rank
        payload["free_indices"] = list(res.free_indices) if res.free_indices else None
        if res.cone_free_index is not None:
            payload["cone"] = {
                "free_index": res.cone_free_index,
                "coefficients": list(res.cone_coefficients),
            }
        else:
            payload["cone"] = None
    else:
        payload["class"] = classify_trivial(alg, eps=args.tol).value
    return payload, 0


def _cmd_idempotents(args, parser):
    closed = idempotents_example2(args.lam, args.mu, args.t)
    payload = {
        "lambda": float(args.lam),
        "mu": float(args.mu),
        "t": float(args.t),
        "count": len(closed),
        "points": _points_list(closed.points),
        "exactness": closed.exactness.value,
    }
    code = 0
    if args.oracle:
        snap = chains.example2(args.lam, args.mu).snapshot(0.0, args.t)
        oracle = idempotent_oracle(snap, radius=args.radius, step=args.step, tol=args.tol)
        agree = points_match(oracle.points, closed.points, radius=1e-4)
        payload["oracle_count"] = len(oracle)
        payload["oracle_points"] = _points_list(oracle.points)
        payload["agree"] = agree
        code = 0 if agree else 1
    return payload, code


def _cmd_critical_times(args, parser):
    if args.analysis == "p1":
        if args.lam is None or args.c is None:
            parser.error("--analysis p1 requires --lambda and --c")
        crit = critical_times_p1(args.lam, args.c)
        return {
            "analysis": "p1",
            "lambda": float(args.lam),
            "c": float(args.c),
            "case": crit.case,
            "t_c": crit.t_c,
            "t_c_prime": crit.t_c_prime,
        }, 0
    if args.lam is None or args.mu is None:
        parser.error("--analysis idempotent requires --lambda and --mu")
    return {
        "analysis": "idempotent",
        "lambda": float(args.lam),
        "mu": float(args.mu),
        "t_c": idempotent_critical_time(args.lam, args.mu),
    }, 0


def _cmd_diagram(args, parser):
    fam = _family_from_args(args, parser)
    prop = _PROPERTY_MAP[args.property]
    d = diagram(fam, prop, args.tmax, args.grid, eps=args.eps)
    write_diagram_csv(d, args.out)
    n = d.resolution
    payload = {
        "family": fam.variant,
        "property": args.property,
        "t_max": d.t_max,
        "grid": n,
        "eps": d.eps,
        "cells": n * (n + 1) // 2,
        "undetermined": int(np.sum(d.cells == -1)),
        "out": args.out,
    }
    if prop is DiagramProperty.BARIC:
        payload["baric_fraction"] = baric_fraction(d)
    if args.plot:
        from .plotting import render_diagram

        render_diagram(d, args.plot)
        payload["plot"] = args.plot
    return payload, 0


def _cmd_limits(args, parser):
    cls = chains.limit_classify_example2(args.lam, args.mu)
    matrix = LIMIT_MATRICES.get(cls)
    payload = {
        "family": "example2",
        "lambda": float(args.lam),
        "mu": float(args.mu),
        "class": cls.value,
        "matrix": None if matrix is None else matrix.tolist(),
    }
    if args.numeric:
        fam = chains.example2(args.lam, args.mu)
        num = chains.numeric_limit(fam, 0.0, args.tprobe)
        payload["t_probe"] = float(args.tprobe)
        payload["numeric_matrix"] = None if num is None else num.tolist()
    return payload, 0


def _cmd_iso(args, parser):
    return {
        "a": float(args.a),
        "b": float(args.b),
        "sign": args.sign,
        "isomorphic": iso_rotation(args.a, args.b, args.sign),
    }, 0


def _cmd_density(args, parser):
    hit = density_search(args.a, args.tol, args.nmax)
    payload = {"a": float(args.a), "tol": float(args.tol), "n_max": int(args.nmax)}
    if hit is None:
        payload.update({"found": False, "n": None, "sign": None, "cos_n": None})
    else:
        n, sign = hit
        payload.update({"found": True, "n": n, "sign": sign, "cos_n": float(np.cos(n))})
    return payload, 0


def _cmd_baric_times(args, parser):
    if args.controller == "tan":
        ctrl = tan_controller()
    elif args.controller == "sin":
        ctrl = sin_controller()
    else:
        if args.lam is None or args.c is None:
            parser.error("--controller explinear requires --lambda and --c")
        ctrl = explinear_controller(args.lam, args.c)
    lo, hi = args.window
    times = baric_times(ctrl, args.s, (lo, hi), tol=args.tol)
    return {
        "controller": args.controller,
        "s": float(args.s),
        "window": [float(lo), float(hi)],
        "poles": ctrl.poles_in(lo, hi),
        "times": times,
    }, 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evochain",
        description="Chains of evolution algebras: validation, analyzers, diagrams.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json", help="report format (default: json)")
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    sp = sub.add_parser("verify-ck", parents=[common], formatter_class=fmt, help="check the Chapman-Kolmogorov identity on random triples")
    _add_family_flags(sp)
    sp.add_argument("--tmax", type=float, required=True, help="upper end of the time window")
    sp.add_argument("--samples", type=int, default=200, help="number of (s, tau, t) triples")
    sp.add_argument("--seed", type=int, default=42, help="RNG seed")
    sp.add_argument("--tol", type=float, default=1e-9, help="max allowed residual")
    sp.set_defaults(fn=_cmd_verify_ck)

    sp = sub.add_parser("analyze", parents=[common], formatter_class=fmt, help="analyze one snapshot or matrix file")
    _add_family_flags(sp)
    sp.add_argument("--matrix", help="plain-text structure matrix file")
    sp.add_argument("--s", type=float, help="start time (with --family)")
    sp.add_argument("--t", type=float, help="end time (with --family)")
    sp.add_argument("--property", choices=("baric", "nilpotent", "trivial"), required=True)
    sp.add_argument("--tol", type=float, default=1e-9, help="analyzer tolerance eps")
    sp.set_defaults(fn=_cmd_analyze)

    sp = sub.add_parser("idempotents", parents=[common], formatter_class=fmt, help="closed-form idempotents of the example2 snapshot")
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--mu", type=float, required=True)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--oracle", action="store_true", help="cross-check against the numeric grid search")
    sp.add_argument("--radius", type=float, default=10.0, help="oracle grid radius")
    sp.add_argument("--step", type=float, default=0.05, help="oracle grid step")
    sp.add_argument("--tol", type=float, default=1e-9, help="oracle residual tolerance")
    sp.set_defaults(fn=_cmd_idempotents)

    sp = sub.add_parser("critical-times", parents=[common], formatter_class=fmt, help="baric or idempotent critical times")
    sp.add_argument("--analysis", choices=("p1", "idempotent"), required=True)
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--c", type=float)
    sp.add_argument("--mu", type=float)
    sp.set_defaults(fn=_cmd_critical_times)

    sp = sub.add_parser("diagram", parents=[common], formatter_class=fmt, help="rasterize a property over the time triangle to CSV")
    _add_family_flags(sp)
    sp.add_argument("--property", choices=tuple(_PROPERTY_MAP), required=True)
    sp.add_argument("--tmax", type=float, required=True)
    sp.add_argument("--grid", type=int, required=True, help="cells per axis")
    sp.add_argument("--eps", type=float, default=1e-6, help="cell classification tolerance")
    sp.add_argument("--out", required=True, help="output CSV path")
    sp.add_argument("--plot", help="optional PNG path rendered alongside the CSV")
    sp.set_defaults(fn=_cmd_diagram)

    sp = sub.add_parser("limits", parents=[common], formatter_class=fmt, help="limit class of the example2 family")
    sp.add_argument("--family", choices=("example2",), required=True)
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--mu", type=float, required=True)
    sp.add_argument("--numeric", action="store_true", help="probe the matrix at a large time")
    sp.add_argument("--tprobe", type=float, default=30.0, help="probe time for --numeric")
    sp.set_defaults(fn=_cmd_limits)

    sp = sub.add_parser("iso", parents=[common], formatter_class=fmt, help="isomorphism decision for rotation algebras")
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--sign", choices=("+", "-"), default="+", help="family branch (use --sign=-)")
    sp.set_defaults(fn=_cmd_iso)

    sp = sub.add_parser("density", parents=[common], formatter_class=fmt, help="smallest n with cos(n) near a")
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--tol", type=float, required=True)
    sp.add_argument("--nmax", type=int, required=True)
    sp.set_defaults(fn=_cmd_density)

    sp = sub.add_parser("baric-times", parents=[common], formatter_class=fmt, help="times t with theta(t) = theta(s)")
    sp.add_argument("--controller", choices=("tan", "sin", "explinear"), required=True)
    sp.add_argument("--lambda", dest="lam", type=float, help="explinear lambda")
    sp.add_argument("--c", type=float, help="explinear slope")
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--window", type=float, nargs=2, required=True, metavar=("LO", "HI"))
    sp.add_argument("--tol", type=float, default=1e-10, help="acceptance tolerance on theta(t) - theta(s)")
    sp.set_defaults(fn=_cmd_baric_times)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        payload, code = args.fn(args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (InputError, EvaluationDomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.format == "text":
        print(report.render_text(payload))
    else:
        print(report.dumps(payload))
    return code


if __name__ == "__main__":
    sys.exit(main())
