"""Command-line interface.

Subcommands ``kernel``, ``residual``, ``identity``, ``invert`` and
``infeasible`` each write one table (CSV or JSON) plus a JSON manifest next
to it. Exit codes: 0 success, 1 tolerance failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import math
import sys
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from . import __version__
from .abel import indicator_infeasibility, log_grid, residual_check
from .kernels import Dims, kernel_eval, matching_pair, psi_eval
from .numerics import AccuracyError, gamma_fn
from .transforms import (BallPhantom, GaussianPhantom, backproject_mc, backproject_reduced,
                         convolve_oracle, invert_sweep)

EXIT_OK, EXIT_TOLERANCE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fmt(v):
    if isinstance(v, float):
        return "%.17g" % v
    return v


def _jsonable(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    return v


def write_table(path: Path, columns, rows, fmt: str, meta: dict):
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_fmt(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    else:
        doc = {"meta": {k: _jsonable(v) for k, v in meta.items()},
               "columns": list(columns),
               "rows": [[_jsonable(v) for v in row] for row in rows]}
        path.write_text(json.dumps(doc, indent=1) + "\n")


def write_manifest(args, parameters: dict, outputs) -> Path:
    out = Path(args.out)
    manifest = out.with_name(out.stem + ".manifest.json")
    doc = {
        "command": args.command,
        "parameters": {k: _jsonable(v) for k, v in parameters.items()},
        "seed": args.seed,
        "tool_version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "output_paths": [str(p) for p in outputs],
    }
    manifest.write_text(json.dumps(doc, indent=1) + "\n")
    return manifest


def _vector(text: str, n: int) -> np.ndarray:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse vector {text!r}") from None
    if len(vals) == 1 and vals[0] == 0.0:
        vals = [0.0] * n
    if len(vals) < n:
        vals += [0.0] * (n - len(vals))
    if len(vals) != n:
        raise UsageError(f"vector {text!r} does not have {n} components")
    return np.array(vals)


def _dims(args) -> Dims:
    try:
        return Dims(args.n, args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _refuse_indicator(dims: Dims):
    const = indicator_infeasibility(dims)
    raise UsageError(
        f"the unit-ball indicator admits no locally integrable kernel for k={dims.k} >= 2: "
        f"the forced right-hand side tends to the obstruction constant {const:.17g} "
        f"(= -Gamma((n-k)/2)/Gamma(n/2)) as u -> 1+, while the left side tends to 0. "
        f"Use --family theoremB.")


def _pair(args, dims):
    psi = getattr(args, "psi", None)
    if psi is None:
        family = args.family or ("theoremA" if dims.k == 1 else "theoremB")
    else:
        family = "theoremA" if psi == "indicator" else "theoremB"
        if args.family not in (None, family):
            raise UsageError(f"--psi {psi} contradicts --family {args.family}")
    if family == "theoremA" and dims.k >= 2:
        _refuse_indicator(dims)
    kernel, profile = matching_pair(dims, family)
    return family, kernel, profile


def _phantom(args, n):
    if args.phantom == "gaussian":
        return GaussianPhantom(args.sigma, n)
    return BallPhantom(args.radius, args.height, n)


def _kernel_roots(kernel, lo, hi, count=2000):
    rs = np.geomspace(max(lo, 1.0 + 1e-9), hi, count)
    ws = [kernel_eval(kernel, r) for r in rs]
    roots = []
    for r0, r1, w0, w1 in zip(rs, rs[1:], ws, ws[1:]):
        if w0 == 0.0:
            roots.append(float(r0))
        elif w0 * w1 < 0:
            roots.append(brentq(lambda r: kernel_eval(kernel, r), r0, r1, xtol=1e-15))
    return roots


def cmd_kernel(args):
    dims = _dims(args)
    if args.r_min <= 0 or args.r_max <= args.r_min:
        raise UsageError("need 0 < r-min < r-max (the grid is log-spaced)")
    if args.samples < 2:
        raise UsageError("samples must be at least 2")
    family, kernel, profile = _pair(args, dims)
    grid = list(np.geomspace(args.r_min, args.r_max, args.samples))
    # sign changes of w are added to the grid so they appear as table rows
    if args.r_max > 1.0:
        grid = sorted(set(map(float, grid)) | set(_kernel_roots(kernel, args.r_min, args.r_max)))
    rows = [(r, kernel_eval(kernel, r), psi_eval(profile, r)) for r in grid]
    meta = {"family": family, "n": dims.n, "k": dims.k, "ell": dims.ell, "lambda": profile.lam}
    return ["r", "w", "psi"], rows, meta, EXIT_OK, f"{len(rows)} rows, lambda={profile.lam:.12g}"


def cmd_residual(args):
    dims = _dims(args)
    family, kernel, profile = _pair(args, dims)
    tol = 1e-6 if args.tol is None else args.tol
    grid = log_grid(args.r_min, args.r_max, args.points)
    report = residual_check(kernel, profile, dims, grid)
    rows = report.rows()
    ok = report.complete and report.max_abs_err <= tol
    meta = {"family": family, "n": dims.n, "k": dims.k, "tol": tol,
            "max_abs_err": report.max_abs_err, "failures": len(report.failures)}
    return (["r", "lhs", "rhs", "abs_err"], rows, meta, EXIT_OK if ok else EXIT_TOLERANCE,
            f"max_abs_err={report.max_abs_err:.3e} (tol {tol:.1e})")


def cmd_identity(args):
    dims = _dims(args)
    if not args.a > 0:
        raise UsageError("a must be positive")
    family, kernel, profile = _pair(args, dims)
    phantom = _phantom(args, dims.n)
    points = args.x or ["0", "0.5", "1.5"]
    tol = 1e-4 if args.tol is None else args.tol
    rows, ok = [], True
    for text in points:
        x = _vector(text, dims.n)
        conv = convolve_oracle(phantom, profile, x, args.a)
        try:
            if args.engine == "reduced":
                value, se = backproject_reduced(kernel, phantom, dims, x, args.a), 0.0
                passed = abs(value - conv) <= tol
            else:
                value, se = backproject_mc(kernel, phantom, dims, x, args.a, args.samples, args.seed)
                passed = abs(value - conv) <= 3.0 * se + 1e-12
        except AccuracyError:
            value, se, passed = math.nan, math.nan, False
        ok &= passed
        rows.append((",".join("%.17g" % v for v in x), value, conv, abs(value - conv), se,
                     "ok" if passed else "fail"))
    meta = {"family": family, "n": dims.n, "k": dims.k, "a": args.a, "engine": args.engine,
            "phantom": args.phantom, "tol": tol}
    worst = max(r[3] for r in rows)
    return (["x", "backprojection", "convolution", "abs_diff", "std_error", "status"], rows, meta,
            EXIT_OK if ok else EXIT_TOLERANCE, f"max abs diff {worst:.3e}")


def cmd_invert(args):
    dims = _dims(args)
    if args.steps < 1:
        raise UsageError("steps must be at least 1")
    if not 0 < args.factor < 1 or not args.a_start > 0:
        raise UsageError("need a-start > 0 and 0 < factor < 1")
    family, kernel, profile = _pair(args, dims)
    phantom = _phantom(args, dims.n)
    x = _vector(args.x or "0", dims.n)
    res = invert_sweep(phantom, dims, kernel, profile, x, args.a_start, args.factor, args.steps,
                       args.engine, args.samples, args.seed)
    orders = [math.nan] + res.observed_orders
    se = res.std_errors or [0.0] * len(res.schedule)
    rows = [(a, e, err, o, s, "ok" if math.isfinite(e) else "failed")
            for a, e, err, o, s in zip(res.schedule, res.estimates, res.errors, orders, se)]
    meta = {"family": family, "n": dims.n, "k": dims.k, "target": res.target,
            "lambda": profile.lam, "engine": args.engine}
    return (["a", "estimate", "abs_err", "observed_order", "std_error", "status"], rows, meta, EXIT_OK,
            f"final abs_err={res.errors[-1]:.3e} (f(x)={res.target:.6g})")


def cmd_infeasible(args):
    dims = _dims(args)
    if dims.k < 2:
        raise UsageError("k = 1 has no obstruction: the indicator pairing exists")
    value = indicator_infeasibility(dims)
    closed = -gamma_fn((dims.n - dims.k) / 2) / gamma_fn(dims.n / 2)
    rows = [(dims.n, dims.k, value, closed)]
    return (["n", "k", "obstruction", "closed_form"], rows, {"n": dims.n, "k": dims.k},
            EXIT_OK, f"obstruction constant {value:.17g}")


COMMANDS = {
    "kernel": cmd_kernel,
    "residual": cmd_residual,
    "identity": cmd_identity,
    "invert": cmd_invert,
    "infeasible": cmd_infeasible,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output table path (default: kplane_<command>.<format>)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--quiet", action="store_true")
    common.add_argument("--n", type=int, required=True)
    common.add_argument("--k", type=int, required=True)

    pair = argparse.ArgumentParser(add_help=False)
    pair.add_argument("--family", choices=("theoremA", "theoremB"), default=None,
                      help="theoremA: ball-indicator mollifier (k = 1); theoremB: power-tail mollifier")

    phantom = argparse.ArgumentParser(add_help=False)
    phantom.add_argument("--phantom", choices=("gaussian", "ball"), default="gaussian")
    phantom.add_argument("--sigma", type=float, default=1.0)
    phantom.add_argument("--radius", type=float, default=1.0)
    phantom.add_argument("--height", type=float, default=1.0)
    phantom.add_argument("--engine", choices=("reduced", "mc"), default="reduced")
    phantom.add_argument("--samples", type=int, default=20_000)

    parser = argparse.ArgumentParser(prog="kplane", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel", parents=[common, pair], help="tabulate w and psi")
    p.add_argument("--r-min", type=float, default=0.05)
    p.add_argument("--r-max", type=float, default=20.0)
    p.add_argument("--samples", type=int, default=200)

    p = sub.add_parser("residual", parents=[common, pair], help="check the Abel-type equation")
    p.add_argument("--psi", choices=("indicator", "powertail"), default=None)
    p.add_argument("--r-min", type=float, default=0.05)
    p.add_argument("--r-max", type=float, default=20.0)
    p.add_argument("--points", type=int, default=30)

    p = sub.add_parser("identity", parents=[common, pair, phantom],
                       help="compare backprojection with the mollifier convolution")
    p.add_argument("--a", type=float, default=0.5)
    p.add_argument("--x", action="append", help="comma-separated point; repeatable")

    p = sub.add_parser("invert", parents=[common, pair, phantom], help="inversion sweep a -> 0")
    p.add_argument("--x", default=None)
    p.add_argument("--a-start", type=float, default=1.0)
    p.add_argument("--factor", type=float, default=0.5)
    p.add_argument("--steps", type=int, default=6)

    sub.add_parser("infeasible", parents=[common], help="obstruction constant for k >= 2")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.out is None:
        args.out = f"kplane_{args.command}.{args.format}"
    try:
        columns, rows, meta, code, summary = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"kplane {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = Path(args.out)
    write_table(out, columns, rows, args.format, meta)
    params = {k: v for k, v in vars(args).items() if k not in ("out", "command", "quiet")}
    params.update(meta)
    if isinstance(params.get("x"), list):
        params["x"] = ";".join(params["x"])
    manifest = write_manifest(args, params, [out])
    if not args.quiet:
        print(f"kplane {args.command}: {summary}")
        print(f"wrote {out} and {manifest}")
    return code


if __name__ == "__main__":
    sys.exit(main())
