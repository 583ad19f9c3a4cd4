"""Command-line front end: ``ptmathieu {perturb,chart,trace,edges,compare}``.

Exit codes: 0 success, 1 usage error, 2 numerical failure on all requested
work.  Every option may also come from ``--config FILE`` holding
``key = value`` lines named like the long flags (``eps-max = 0.3``); flags
given on the command line win.
"""

from __future__ import annotations

import argparse
import configparser
import math
import shlex
import sys
import warnings

import numpy as np

from . import __version__, core
from .chart import compute_chart
from .core import BranchId
from .errors import ParameterError, TruncationWarning
from .floquet import DEFAULT_STEPS, DEFAULT_TOL
from .hill import DEFAULT_TRUNCATION, band_edges, hermitian_equivalence_check
from .output import csv_text, json_text, svg_curves, svg_heatmap, write_text
from .tracer import CURVATURE_EPS_MAX, compare_report, estimate_curvature, trace_boundary
from ._parallel import default_jobs

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2

FIGURE_BETAS = "0,0.5,0.9"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text):
    try:
        values = [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _common(p, *, beta_default, eps_max_default=None, samples_default=None, beta_list=True):
    p.add_argument("--config", metavar="FILE", help="key = value file mirroring flag names")
    p.add_argument(
        "--beta",
        type=_float_list if beta_list else float,
        default=beta_default,
        help="non-Hermitian parameter" + (" (comma list)" if beta_list else ""),
    )
    if eps_max_default is not None:
        p.add_argument("--eps-max", type=float, default=eps_max_default)
    if samples_default is not None:
        p.add_argument("--samples", type=_positive_int, default=samples_default)
    p.add_argument("--steps", type=_positive_int, default=DEFAULT_STEPS, help="RK4 steps per period")
    p.add_argument("--trunc", type=_positive_int, default=DEFAULT_TRUNCATION, help="Hill truncation N")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="growth-rate tolerance")
    p.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    p.add_argument("--out", metavar="PATH", default=None, help="output file (default stdout)")
    p.add_argument("--jobs", type=_positive_int, default=None, help="worker processes (default: CPUs)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ptmathieu", description="Stability analysis of the PT-symmetric Mathieu equation")
    parser.add_argument("--version", action="version", version=f"ptmathieu {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("perturb", help="closed-form boundary curves (figure reproduction)")
    _common(p, beta_default=_float_list(FIGURE_BETAS), eps_max_default=0.5, samples_default=101)

    p = sub.add_parser("chart", help="Floquet stability raster")
    _common(p, beta_default=0.5, beta_list=False)
    p.add_argument("--a-min", type=float, default=-0.1)
    p.add_argument("--a-max", type=float, default=0.5)
    p.add_argument("--a-steps", type=_positive_int, default=121)
    p.add_argument("--eps-min", type=float, default=0.0)
    p.add_argument("--eps-max", type=float, default=0.3)
    p.add_argument("--eps-steps", type=_positive_int, default=61)

    p = sub.add_parser("trace", help="trace one tongue edge with the Floquet engine")
    _common(p, beta_default=0.0, eps_max_default=0.1, samples_default=11, beta_list=False)
    p.add_argument("--branch", default="zero", help="zero | quarter+ | quarter-")

    p = sub.add_parser("edges", help="band edges from the Hill matrix")
    _common(p, beta_default=0.0, beta_list=False)
    p.add_argument("--nu", type=float, default=0.0, help="0 (periodic) or 0.5 (antiperiodic)")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--count", type=_positive_int, default=3)

    p = sub.add_parser("compare", help="closed form vs Floquet vs Hill table")
    _common(p, beta_default=_float_list(FIGURE_BETAS))
    p.add_argument("--eps", type=_float_list, default=_float_list("0.02,0.05,0.1"))
    return parser


def _read_config(path):
    cp = configparser.ConfigParser(interpolation=None, delimiters=("=",), comment_prefixes=("#", ";"))
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_string("[config]\n" + fh.read())
    except (OSError, configparser.Error) as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from None
    return dict(cp["config"])


def _apply_config(parser, argv):
    """Re-parse with config values as defaults so explicit flags win."""
    args = parser.parse_args(argv)
    if not args.config:
        return args
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest: a for a in subparser._actions}
    defaults = {}
    for key, raw in _read_config(args.config).items():
        dest = key.strip().lstrip("-").replace("-", "_")
        if dest not in known or dest in ("help", "config"):
            raise UsageError(f"unknown config key {key!r} for {args.command}")
        action = known[dest]
        try:
            defaults[dest] = action.type(raw) if action.type else raw
        except (argparse.ArgumentTypeError, ValueError) as exc:
            raise UsageError(f"bad value for {key!r}: {exc}") from None
        if action.choices and defaults[dest] not in action.choices:
            raise UsageError(f"bad value for {key!r}: {raw!r}")
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def _invocation(argv):
    return f"ptmathieu {__version__} | ptmathieu " + " ".join(shlex.quote(a) for a in argv)


def _emit(args, argv, *, columns, rows, footer=(), payload, svg=None):
    header = _invocation(argv)
    if args.format == "csv":
        text = csv_text(header, columns, rows, footer)
    elif args.format == "json":
        text = json_text({"tool": "ptmathieu", "version": __version__, "invocation": header, **payload})
    else:
        if svg is None:
            raise UsageError(f"--format svg is not available for {args.command}")
        text = svg(header)
    write_text(text, args.out)


# ---------------------------------------------------------------------------
# subcommands


def cmd_perturb(args, argv):
    for b in args.beta:
        if not 0.0 <= b <= 1.0:
            raise UsageError(f"--beta values must lie in [0, 1], got {b}")
    if args.eps_max < 0:
        raise UsageError("--eps-max must be >= 0")
    if args.samples < 2:
        raise UsageError("--samples must be >= 2")
    eps = [float(e) for e in np.linspace(0.0, args.eps_max, args.samples)]
    curves = []
    for b in args.beta:
        for branch in BranchId:
            curves.append((b, branch, [core.boundary(branch, e, b) for e in eps]))

    rows = [(b, branch.value, e, a) for b, branch, avals in curves for e, a in zip(eps, avals)]
    payload = {
        "command": "perturb",
        "curves": [
            {"beta": b, "branch": branch.value, "eps": eps, "a": avals} for b, branch, avals in curves
        ],
    }

    def svg(header):
        series = [
            {
                "xs": avals,
                "ys": eps,
                "label": f"beta={b:g} {branch.value}",
                "color_index": args.beta.index(b),
                "dashed": branch is BranchId.A0_QUARTER_MINUS,
            }
            for b, branch, avals in curves
        ]
        return svg_curves(series, "a", "eps", "closed-form stability boundaries", header)

    _emit(args, argv, columns=("beta", "branch", "eps", "a"), rows=rows, payload=payload, svg=svg)
    return EXIT_OK


def cmd_chart(args, argv):
    if args.tol <= 0:
        raise UsageError("--tol must be positive")
    try:
        grid = compute_chart(
            args.a_min,
            args.a_max,
            args.a_steps,
            args.eps_min,
            args.eps_max,
            args.eps_steps,
            args.beta,
            steps=args.steps,
            tol=args.tol,
            jobs=args.jobs,
        )
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    rows = [(c.a, c.eps, c.classification, c.growth_rate, c.re_delta, c.im_delta) for c in grid.cells]
    payload = {
        "command": "chart",
        "grid": {
            "a_min": grid.a_min,
            "a_max": grid.a_max,
            "a_steps": grid.a_steps,
            "eps_min": grid.eps_min,
            "eps_max": grid.eps_max,
            "eps_steps": grid.eps_steps,
            "beta": grid.beta,
        },
        "counts": grid.counts(),
        "cells": [
            {"a": c.a, "eps": c.eps, "class": c.classification, "growth_rate": c.growth_rate,
             "re_delta": c.re_delta, "im_delta": c.im_delta}
            for c in grid.cells
        ],
    }

    def svg(header):
        overlay = []
        if grid.beta <= 1.0:
            es = [e for e in grid.eps_values if e <= min(grid.eps_max, 0.5)]
            for branch in BranchId:
                avals = [core.boundary(branch, e, grid.beta) for e in es]
                pts = [(a, e) for a, e in zip(avals, es) if grid.a_min <= a <= grid.a_max]
                if len(pts) > 1:
                    overlay.append({"xs": [p[0] for p in pts], "ys": [p[1] for p in pts],
                                    "dashed": branch is BranchId.A0_QUARTER_MINUS})
        return svg_heatmap(
            list(grid.a_values), list(grid.eps_values),
            [c.growth_rate for c in grid.cells], [c.classification for c in grid.cells],
            overlay, "a", "eps", f"Floquet growth rate, beta={grid.beta:g}", header,
        )

    _emit(args, argv, columns=("a", "eps", "class", "growth_rate", "re_delta", "im_delta"),
          rows=rows, payload=payload, svg=svg)
    counts = grid.counts()
    return EXIT_NUMERIC if counts["overflow"] == len(grid.cells) else EXIT_OK


def cmd_trace(args, argv):
    try:
        branch = BranchId.parse(args.branch)
        curve = trace_boundary(branch, args.beta, args.eps_max, args.samples, steps=args.steps)
        # the curvature fit always uses its own fine sampling of [0, 0.05]
        fit_curve = trace_boundary(branch, args.beta, min(args.eps_max, CURVATURE_EPS_MAX), 11, steps=args.steps)
        report = estimate_curvature(fit_curve) if not fit_curve.closed else None
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    rows = [
        (e, a, curve.target_discriminant, r, m)
        for (e, a), r, m in zip(curve.samples, curve.residuals, curve.merged)
    ]
    rep = {}
    if report is not None:
        rep = {
            "kappa_numeric": report.kappa_numeric,
            "kappa_paper": report.kappa_paper,
            "relative_error": report.relative_error,
            "slope_numeric": report.slope_numeric,
            "slope_paper": report.slope_paper,
            "fit_degree": report.fit_degree,
        }
    footer = [f"branch={branch.value}", f"beta={args.beta:.12g}",
              f"closed_at={'none' if curve.closed_at is None else format(curve.closed_at, '.12g')}",
              f"merged={int(curve.is_merged)}"]
    footer += [f"{k}={v:.12g}" if isinstance(v, float) else f"{k}={v}" for k, v in rep.items()]
    payload = {
        "command": "trace",
        "branch": branch.value,
        "beta": args.beta,
        "target_discriminant": curve.target_discriminant,
        "closed_at": curve.closed_at,
        "merged": curve.is_merged,
        "samples": [{"eps": e, "a": a, "residual": r, "merged": m}
                    for (e, a), r, m in zip(curve.samples, curve.residuals, curve.merged)],
        "report": rep or None,
    }

    def svg(header):
        es = list(curve.eps)
        series = [
            {"xs": list(curve.a), "ys": es, "label": f"Floquet {branch.value}", "color_index": 1},
            {"xs": [core.boundary(branch, e, args.beta) for e in es], "ys": es,
             "label": "closed form", "color_index": 0, "dashed": True},
        ]
        return svg_curves(series, "a", "eps", f"traced edge {branch.value}, beta={args.beta:g}", header)

    _emit(args, argv, columns=("eps", "a", "target", "residual", "merged"), rows=rows, footer=footer,
          payload=payload, svg=svg)
    return EXIT_NUMERIC if len(curve.samples) <= 1 and curve.closed else EXIT_OK


def cmd_edges(args, argv):
    if not 0.0 <= args.beta <= 1.0:
        raise UsageError(f"--beta must lie in [0, 1] for band edges, got {args.beta}")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TruncationWarning)
        try:
            edges = band_edges(args.nu, args.eps, args.beta, args.trunc, args.count)
        except ParameterError as exc:
            raise UsageError(str(exc)) from None
        truncation = any(issubclass(w.category, TruncationWarning) for w in caught)
        deviation = hermitian_equivalence_check(args.eps, args.beta, args.trunc) if args.beta < 1.0 else math.nan
    rows = [(i, args.nu, args.eps, args.beta, a) for i, a in enumerate(edges)]
    footer = [f"hermitian_equivalence_deviation={deviation:.12g}", f"truncation_warning={int(truncation)}"]
    payload = {
        "command": "edges",
        "nu": args.nu,
        "eps": args.eps,
        "beta": args.beta,
        "trunc": args.trunc,
        "edges": edges,
        "hermitian_equivalence_deviation": deviation,
        "truncation_warning": truncation,
    }
    _emit(args, argv, columns=("index", "nu", "eps", "beta", "a"), rows=rows, footer=footer, payload=payload)
    return EXIT_OK


def cmd_compare(args, argv):
    try:
        table = compare_report(args.beta, args.eps, steps=2 * args.steps, N=args.trunc, jobs=args.jobs)
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    columns = ("branch", "beta", "eps", "a_perturbative", "a_floquet", "a_hill",
               "abs_error_pert", "cross_engine_error", "flag")
    rows = [(r.branch.value, r.beta, r.eps, r.a_perturbative, r.a_floquet, r.a_hill,
             r.abs_error_pert, r.cross_engine_error, r.flag) for r in table]
    payload = {"command": "compare", "rows": [dict(zip(columns, row)) for row in rows]}
    _emit(args, argv, columns=columns, rows=rows, payload=payload)
    failed = sum(r.flag in ("no_bracket", "nonfinite") for r in table)
    return EXIT_NUMERIC if table and failed == len(table) else EXIT_OK


COMMANDS = {
    "perturb": cmd_perturb,
    "chart": cmd_chart,
    "trace": cmd_trace,
    "edges": cmd_edges,
    "compare": cmd_compare,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        if getattr(args, "jobs", None) is None:
            args.jobs = default_jobs()
        return COMMANDS[args.command](args, argv)
    except UsageError as exc:
        print(f"ptmathieu: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    except (ArithmeticError, RuntimeError) as exc:
        print(f"ptmathieu: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
