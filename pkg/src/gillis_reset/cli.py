"""Command-line surface: classify, sweep, optimize, threshold, validate.

All data output is machine-readable (comma CSV or JSON) with floats at
17 significant digits so files round-trip exactly and diff cleanly.
Run metadata never goes into the data stream; with --out it lands in a
".meta.json" sidecar next to the data file.

Exit codes: 0 success, 1 numeric or validation failure, 2 argument
error.  The Monte Carlo seed comes from --seed, else the
GRW_DEFAULT_SEED environment variable, else a fixed default.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from importlib import metadata

import numpy as np

from . import gillis as gw
from . import montecarlo as mc
from . import optimize as op
from . import resetting as rs
from . import validate as val
from .errors import DomainError, GrwError

DEFAULT_SEED = 20260809
SWEEP_COLUMNS = (
    "epsilon", "x0", "xr", "r", "mean_analytic", "std_analytic", "cv",
    "mean_mc", "se_mc", "regime", "rho",
)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return format(value, ".17g")
    return str(value)


def _package_version() -> str:
    try:
        return metadata.version("gillis-reset")
    except metadata.PackageNotFoundError:  # pragma: no cover
        return "unknown"


def _emit(text: str, out_path: str | None, meta: dict) -> None:
    if out_path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(text)
        if not text.endswith("\n"):
            fh.write("\n")
    with open(out_path + ".meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("GRW_DEFAULT_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise DomainError(f"GRW_DEFAULT_SEED={env!r} is not an integer") from exc
    return DEFAULT_SEED


def _csv_line(values) -> str:
    return ",".join(_fmt(v) for v in values)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def _cmd_classify(args) -> int:
    regime = gw.classify_regime(args.epsilon)
    row = {
        "epsilon": args.epsilon,
        "regime": regime.kind.value,
        "rho": regime.rho,
        "delta": regime.delta,
        "return_probability": regime.return_probability,
        "mean_return_time": regime.mean_return_time,
    }
    if args.format == "csv":
        text = _csv_line(row.keys()) + "\n" + _csv_line(row.values())
    else:
        text = json.dumps(row, indent=2)
    _emit(text, args.out, _meta(args))
    return 0


def _r_grid(args, parser) -> list[float]:
    if args.r is not None:
        grid = args.r
    else:
        if args.r_min is None or args.r_max is None:
            parser.error("provide --r or both --r-min and --r-max")
        if args.r_scale == "log":
            grid = list(np.geomspace(args.r_min, args.r_max, args.r_points))
        else:
            grid = list(np.linspace(args.r_min, args.r_max, args.r_points))
    if not grid or not all(0.0 < r < 1.0 for r in grid):
        parser.error("r grid must lie strictly inside (0, 1)")
    return [float(r) for r in grid]


def _cmd_sweep(args, parser) -> int:
    grid = _r_grid(args, parser)
    spec = gw.WalkSpec(args.epsilon, args.x0, args.xr)
    if args.dump_samples and (len(grid) != 1 or not args.mc):
        parser.error("--dump-samples needs --mc and a single-point r grid")
    free = gw.GillisHittingGf(spec.epsilon)
    regime = gw.classify_regime(spec.epsilon)
    seed = _resolve_seed(args)
    rows = []
    for r in grid:
        summ = rs.moment_summary(free, spec, rs.ResetParams(r))
        row = {
            "epsilon": spec.epsilon, "x0": spec.x0, "xr": spec.xr, "r": r,
            "mean_analytic": summ.mean, "std_analytic": summ.std_dev,
            "cv": summ.cv, "mean_mc": None, "se_mc": None,
            "regime": regime.kind.value, "rho": regime.rho,
        }
        if args.mc:
            cfg = mc.McConfig(n_trajectories=args.mc, seed=seed,
                              max_steps=args.max_steps, workers=args.workers)
            if args.dump_samples:
                samples = mc.sample_hitting_times(spec, r, cfg)
                mc.write_samples(args.dump_samples, samples)
            est = mc.estimate(spec, r, cfg)
            row["mean_mc"] = est.mean
            row["se_mc"] = est.se_mean
        rows.append(row)
    if args.format == "json":
        text = json.dumps(rows, indent=2)
    else:
        lines = [",".join(SWEEP_COLUMNS)]
        lines += [_csv_line(row[c] for c in SWEEP_COLUMNS) for row in rows]
        text = "\n".join(lines)
    _emit(text, args.out, _meta(args, seed=seed if args.mc else None))
    return 0


def _cmd_optimize(args) -> int:
    spec = gw.WalkSpec(args.epsilon, args.x0, args.xr)
    result = op.find_optimal_r(spec)
    if result.r_star is None:
        payload = {"r_star": None, "reason": result.reason}
    else:
        payload = {
            "r_star": result.r_star,
            "z_star": 1.0 - result.r_star,
            "mean_at_star": result.mean_at_star,
            "converged": result.converged,
        }
    _emit(json.dumps(payload, indent=2), args.out, _meta(args))
    return 0


def _cmd_threshold(args) -> int:
    spec = gw.WalkSpec(args.epsilon, args.x0, args.xr)
    result = op.find_threshold_r(spec)
    if result.r_th is None:
        payload = {"r_th": None, "reason": result.reason,
                   "free_mean": result.free_mean}
    else:
        payload = {
            "r_th": result.r_th,
            "z_th": 1.0 - result.r_th,
            "free_mean": result.free_mean,
            "converged": True,
        }
    _emit(json.dumps(payload, indent=2), args.out, _meta(args))
    return 0


def _cmd_validate(args) -> int:
    checks = val.run_suite(args.suite, seed=_resolve_seed(args))
    failures = 0
    for name, passed, detail in checks:
        status = "ok  " if passed else "FAIL"
        print(f"{status} {args.suite}/{name}: {detail}")
        failures += 0 if passed else 1
    print(f"{args.suite}: {len(checks) - failures}/{len(checks)} checks passed")
    return 0 if failures == 0 else 1


def _meta(args, seed=None) -> dict:
    meta = {
        "argv": sys.argv[1:],
        "package_version": _package_version(),
    }
    if seed is not None:
        meta["seed"] = seed
    return meta


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _add_common(sub, xr_required=True):
    sub.add_argument("--epsilon", type=float, required=True)
    sub.add_argument("--x0", type=int, required=True)
    sub.add_argument("--xr", type=int, required=xr_required)
    sub.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grw",
        description="First-hitting statistics for the centrally biased "
                    "lattice walk under geometric resetting",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("classify", help="regime, exponents and constants")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None)

    p = subs.add_parser("sweep", help="analytic (and optional Monte Carlo) "
                                      "moments over an r grid")
    _add_common(p)
    p.add_argument("--r", type=float, action="append",
                   help="explicit grid point; repeatable")
    p.add_argument("--r-min", type=float)
    p.add_argument("--r-max", type=float)
    p.add_argument("--r-points", type=int, default=20)
    p.add_argument("--r-scale", choices=("log", "linear"), default="log")
    p.add_argument("--mc", type=int, default=0,
                   help="number of Monte Carlo trajectories per grid point")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--max-steps", type=int, default=mc.DEFAULT_MAX_STEPS)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--dump-samples", default=None,
                   help="write raw hitting times (single r point, with --mc)")

    p = subs.add_parser("optimize", help="optimal resetting probability")
    _add_common(p)

    p = subs.add_parser("threshold", help="probability above which resetting "
                                          "hurts (positive-recurrent only)")
    _add_common(p)

    p = subs.add_parser("validate", help="cross-check suites")
    p.add_argument("suite", choices=val.SUITES)
    p.add_argument("--seed", type=int, default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "classify":
            return _cmd_classify(args)
        if args.command == "sweep":
            return _cmd_sweep(args, parser)
        if args.command == "optimize":
            return _cmd_optimize(args)
        if args.command == "threshold":
            return _cmd_threshold(args)
        if args.command == "validate":
            return _cmd_validate(args)
    except DomainError as exc:
        parser.exit(2, f"grw: argument error: {exc}\n")
    except GrwError as exc:
        parser.exit(1, f"grw: numeric failure: {exc}\n")
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
