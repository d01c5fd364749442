"""Command line front end.

Subcommands:
  solve        run a named problem preset and write solution files
  convergence  grid refinement study with error/EOC table output
  stability    critical CFL numbers from the Fourier analysis
  operators    dump the reference-element operator matrices

Configuration files are flat ``key = value`` text; values are coerced to
int/float/bool where possible.  Command line ``--set key=value`` entries
override file entries.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import stability
from .basis import build_operators
from .driver import (convergence_study, solve, write_errors_csv,
                     write_meta_json, write_solution_csv)
from .errors import ConfigurationError
from .presets import PRESETS, preset


def coerce(text):
    s = text.strip()
    low = s.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    for cast in (int, float):
        try:
            return cast(s)
        except ValueError:
            pass
    return s


def parse_config_file(path):
    out = {}
    with open(path) as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(
                    f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}"
                )
            key, val = line.split("=", 1)
            out[key.strip()] = coerce(val)
    return out


def _collect_settings(args):
    settings = {}
    if getattr(args, "config", None):
        settings.update(parse_config_file(args.config))
    for item in getattr(args, "set", None) or []:
        if "=" not in item:
            raise ConfigurationError(f"--set needs key=value, got {item!r}")
        key, val = item.split("=", 1)
        settings[key.strip()] = coerce(val)
    return settings


def _build_config(args):
    settings = _collect_settings(args)
    name = args.preset or settings.pop("preset", None)
    if not name:
        raise ConfigurationError("no preset given (use --preset or preset= in the config)")
    return preset(name, **settings)


def cmd_solve(args):
    cfg = _build_config(args)
    result = solve(cfg)
    os.makedirs(args.outdir, exist_ok=True)
    tag = cfg.name or "run"
    write_solution_csv(os.path.join(args.outdir, f"solution_{tag}.csv"), result)
    write_meta_json(os.path.join(args.outdir, "meta.json"), result)
    line = f"{tag}: t={result.t:.6g} steps={result.steps} wall={result.seconds:.3g}s"
    if result.errors:
        err = ", ".join(f"{k} l2={v[0]:.3e}" for k, v in result.errors.items())
        line += " " + err
    print(line)
    return 0


def cmd_convergence(args):
    cfg = _build_config(args)
    grids = [int(g) for g in args.grids.split(",")]
    report = convergence_study(cfg, grids)
    os.makedirs(args.outdir, exist_ok=True)
    path = os.path.join(args.outdir, "errors.csv")
    write_errors_csv(path, report)
    for row in report.rows:
        print(f"n={row['grid']:5d} {row['variable']:>8s} "
              f"l2={row['l2']:.6e} eoc={row['eoc']:.3f}")
    print(f"wrote {path}")
    return 0


def cmd_stability(args):
    ops = build_operators(args.points, args.degree, args.correction)
    if args.region:
        s1, s2, flags = stability.scan_region_2d(ops)
        with open(args.region, "w") as f:
            f.write("sigma1,sigma2,stable\n")
            for i, a in enumerate(s1):
                for j, b in enumerate(s2):
                    f.write(f"{a:.17g},{b:.17g},{int(flags[i, j])}\n")
        print(f"wrote {args.region}")
        return 0
    if args.two_d:
        cfl = stability.find_cfl_2d(ops, tol=args.tol)
    else:
        cfl = stability.find_cfl(ops, args.dissipation, tol=args.tol)
    payload = {
        "degree": args.degree,
        "points": args.points,
        "correction": args.correction,
        "dissipation": None if args.two_d else args.dissipation,
        "two_d": bool(args.two_d),
        "cfl": cfl,
    }
    print(json.dumps(payload))
    return 0


def cmd_operators(args):
    ops = build_operators(args.points, args.degree, args.correction)
    payload = {
        "degree": ops.degree,
        "nodes": ops.nodes.tolist(),
        "weights": ops.weights.tolist(),
        "D": ops.D.tolist(),
        "D1": ops.D1.tolist(),
        "b_L": ops.b_L.tolist(),
        "b_R": ops.b_R.tolist(),
        "V_L": ops.V_L.tolist(),
        "V_R": ops.V_R.tolist(),
    }
    print(json.dumps(payload, indent=2))
    return 0


def _add_problem_args(p):
    p.add_argument("--preset", choices=sorted(PRESETS),
                   help="named problem setup")
    p.add_argument("--config", help="flat key=value configuration file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override a configuration entry (repeatable)")
    p.add_argument("--outdir", default=".", help="output directory")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="lwfr",
        description="Single-step Lax-Wendroff flux reconstruction solver",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run one problem to its final time")
    _add_problem_args(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("convergence", help="grid refinement study")
    _add_problem_args(p)
    p.add_argument("--grids", default="20,40,80,160",
                   help="comma-separated element counts")
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("stability", help="Fourier CFL analysis")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--points", default="gl", choices=["gl", "gll"])
    p.add_argument("--correction", default="radau", choices=["radau", "g2"])
    p.add_argument("--dissipation", default="d2", choices=["d1", "d2"])
    p.add_argument("--two-d", action="store_true", dest="two_d",
                   help="diagonal 2-D CFL limit")
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--region", metavar="OUT_CSV",
                   help="write a 2-D stability-region scan instead")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("operators", help="print reference-element matrices")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--points", default="gl", choices=["gl", "gll"])
    p.add_argument("--correction", default="radau",
                   choices=["radau", "g2", "dfr"])
    p.set_defaults(func=cmd_operators)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
