"""Command-line front end.

Exit codes: 0 ok, 1 usage or parse error, 2 inadmissible material,
3 constraint violation, 4 solver failure, 5 verification failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .cases import CASES, build, describe, jsonable
from .errors import (
    ConfigError,
    ConstraintViolation,
    DomainError,
    HyperbolicityError,
    InadmissibleMaterial,
    SolverFailure,
)
from .material import check_admissible_range, load_material_config, nondimensionalize
from .sim import SimConfig, init_from_profile, profile_bc, run, snapshots_csv
from .travelling import profile_csv
from .validation import Check, ValidationReport

EXIT_OK, EXIT_USAGE, EXIT_INADMISSIBLE, EXIT_CONSTRAINT, EXIT_SOLVER, EXIT_VERIFY = range(6)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is taken by the material contract
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _floats(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _cfl(text):
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"cfl must lie in (0, 1), got {text}")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return str(path)


def _manifest_path(out):
    out = Path(out)
    return out.with_name(out.stem + ".manifest.json")


def _manifest(command, params, inputs, outputs, wall, extra=None):
    m = {
        "command": command,
        "version": __version__,
        "parameters": params,
        "inputs": {str(p): _sha256(p) for p in inputs},
        "outputs": [str(o) for o in outputs],
        "wall_time": wall,
    }
    if extra:
        m.update(extra)
    return json.dumps(jsonable(m), indent=2, sort_keys=True) + "\n"


# --------------------------------------------------------------------------
# parameter flags shared by soliton and simulate

PARAM_FLAGS = {
    "alpha": float, "beta": _floats, "gamma": _floats, "beta0": float, "k": float, "w": float,
    "c1": float, "c2": float, "c3": float, "c4": float, "c5": float, "sign": int,
    "b1": float, "b2": float, "gamma3": float, "A0": float, "A2": float, "branch": int,
}


def _add_param_flags(sp):
    g = sp.add_argument_group("family parameters (defaults depend on --case)")
    for name, typ in PARAM_FLAGS.items():
        g.add_argument(f"--{name}", type=typ, default=None, dest=f"p_{name}")
    g.add_argument("--params", metavar="PATH", help="JSON object of parameter overrides")


def _overrides(args):
    ov = {}
    if args.params:
        try:
            ov.update(json.loads(Path(args.params).read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"{args.params}: {exc}") from None
    for name in PARAM_FLAGS:
        v = getattr(args, f"p_{name}")
        if v is not None:
            ov[name] = v
    return ov


def _command_line(argv):
    return "mcvwave " + " ".join(argv)


# --------------------------------------------------------------------------
# material


def cmd_material(args, argv):
    mat, ctx = load_material_config(args.config)
    t_lo = mat.T0 if args.t_lo is None else args.t_lo
    t_hi = ctx.T_end(mat) if args.t_hi is None else args.t_hi
    if t_lo > t_hi:
        t_lo, t_hi = t_hi, t_lo
    if not t_lo < t_hi:
        raise ConfigError("temperature range is empty")
    rep = check_admissible_range(mat, t_lo, t_hi)
    out = {"admissibility": rep.to_dict(), "derived": ctx.derived(mat)}
    params = nondimensionalize(mat, ctx)
    out["dimensionless"] = params.to_dict()
    out["dimensionless_admissible"] = params.is_admissible()
    text = json.dumps(jsonable(out), indent=2) + "\n"
    if args.out:
        _write(args.out, text)
    sys.stdout.write(text)
    if not rep.whole:
        print(f"inadmissible: lambda and tau are positive only on "
              f"{', '.join(str(i) for i in rep.intervals) or 'no sub-interval'} of [{t_lo!r}, {t_hi!r}]",
              file=sys.stderr)
        return EXIT_INADMISSIBLE
    return EXIT_OK


# --------------------------------------------------------------------------
# soliton


def cmd_soliton(args, argv):
    t0 = time.perf_counter()
    ov = _overrides(args)
    lo, hi, n = CASES[args.case]["xi"]
    lo = lo if args.xi_min is None else args.xi_min
    hi = hi if args.xi_max is None else args.xi_max
    n = n if args.samples is None else args.samples
    if not lo < hi and n > 1:
        raise ConfigError("xi-min must be below xi-max")
    xi = np.linspace(lo, hi, n)
    wp, p, f, _ = build(args.case, ov)
    dlo, dhi = wp.domain_xi
    if xi[0] <= dlo or xi[-1] >= dhi:
        raise DomainError(f"sample range [{lo!r}, {hi!r}] leaves the profile domain ({dlo!r}, {dhi!r})")
    out = args.out or f"{args.case}.csv"
    _write(out, profile_csv(wp, xi))
    man = _manifest_path(out)
    params = describe(args.case, ov)
    params["grid"] = {"xi_min": lo, "xi_max": hi, "samples": n}
    inputs = [args.params] if args.params else []
    _write(man, _manifest(_command_line(argv), params, inputs, [out], time.perf_counter() - t0))
    print(f"wrote {out} ({n} rows) and {man}")
    return EXIT_OK


# --------------------------------------------------------------------------
# simulate


def cmd_simulate(args, argv):
    t0 = time.perf_counter()
    ov = _overrides(args)
    wp, p, f, _ = build(args.case, ov)
    sd = CASES[args.case]["sim"] or {}
    x_min = args.x_min if args.x_min is not None else sd.get("x_min")
    x_max = args.x_max if args.x_max is not None else sd.get("x_max")
    if x_min is None or x_max is None:
        raise ConfigError(f"case {args.case!r} has no default window; pass --x-min and --x-max")
    nx = args.nx if args.nx is not None else sd.get("nx", 1024)
    speed = f.w / f.k
    if args.t_end is not None:
        t_end = args.t_end
    elif speed != 0:
        t_end = sd.get("travel", 0.5 * (x_max - x_min)) / abs(speed)
    else:
        raise ConfigError("stationary case: pass --t-end")
    bc_values = profile_bc(wp, f, x_min, x_max, nx) if args.bc == "fixed" else None
    cfg = SimConfig(nx, x_min, x_max, args.cfl, t_end, args.bc, p, bc_values=bc_values, max_wall=args.max_wall)
    init = init_from_profile(cfg, wp, f, 0.0)
    prefix = args.out or f"sim_{args.case}"
    csv_path = prefix + ".csv"
    man_path = prefix + ".manifest.json"
    params = describe(args.case, ov)
    params["sim"] = cfg.to_dict()
    try:
        res = run(cfg, init, wp, f, n_out=args.n_out, keep_snapshots=True)
    except (SolverFailure, HyperbolicityError) as exc:
        extra = {"status": "failed", "error": {"type": type(exc).__name__, "message": str(exc),
                                               "cell": exc.cell, "t": getattr(exc, "t", None)}}
        _write(man_path, _manifest(_command_line(argv), params, [], [], time.perf_counter() - t0, extra))
        print(f"solver failure: {exc} (cell={exc.cell}, t={getattr(exc, 't', None)})", file=sys.stderr)
        return EXIT_SOLVER
    _write(csv_path, snapshots_csv(res.snapshots))
    extra = {"status": "completed", "steps": res.steps, "diagnostics": res.diagnostics}
    _write(man_path, _manifest(_command_line(argv), params, [args.params] if args.params else [],
                               [csv_path], time.perf_counter() - t0, extra))
    print(f"wrote {csv_path} and {man_path}")
    print(f"steps={res.steps} t_end={res.state.t!r} shape_error={res.diagnostics[-1]['shape_error']!r}")
    return EXIT_OK


# --------------------------------------------------------------------------
# verify


def _parse_tols(items):
    from .verify import DEFAULT_TOLS

    tols = dict(DEFAULT_TOLS)
    for item in items or ():
        if "=" not in item:
            raise ConfigError(f"--tol expects NAME=VALUE, got {item!r}")
        name, value = (s.strip() for s in item.split("=", 1))
        if name not in tols:
            raise ConfigError(f"unknown tolerance {name!r}; known: {', '.join(tols)}")
        try:
            v = float(value)
        except ValueError:
            raise ConfigError(f"tolerance {name!r} is not a number: {value!r}") from None
        if not (v >= 0 and math.isfinite(v)):
            raise ConfigError(f"tolerance {name!r} must be finite and non-negative")
        tols[name] = v
    return tols


def _suite_job(name, tols, target):
    from .verify import run_suite

    kw = {"target": target} if name == "permanence" else {}
    return run_suite(name, tols, **kw).to_dict()


def cmd_verify(args, argv):
    from .verify import SUITES

    if args.suite != "all" and args.suite not in SUITES:
        raise ConfigError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}, all")
    tols = _parse_tols(args.tol)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    t0 = time.perf_counter()
    if args.jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            futs = [ex.submit(_suite_job, n, tols, args.case) for n in names]
            results = [fu.result() for fu in futs]
    else:
        results = [_suite_job(n, tols, args.case) for n in names]
    report = ValidationReport()
    suites = {}
    for name, d in zip(names, results):
        suites[name] = d
        for c in d["checks"]:
            value = c["value"] if isinstance(c["value"], (int, float)) else math.inf
            report.checks.append(Check(f"{name}.{c['name']}", value, c["tol"], c["pass"]))
        for k, v in d.get("notes", {}).items():
            report.notes[f"{name}.{k}"] = v
    out = report.to_dict()
    out["suites"] = {n: d["overall"] for n, d in suites.items()}
    out["tolerances"] = tols
    out["version"] = __version__
    out["wall_time"] = time.perf_counter() - t0
    path = args.out or "verify_report.json"
    _write(path, json.dumps(jsonable(out), indent=2) + "\n")
    failed = [c for c in report.checks if not c.passed]
    for c in failed:
        why = report.notes.get(c.name)
        print(f"FAIL {c.name}: " + (str(why) if isinstance(why, str) else f"{c.value!r} > {c.tol!r}"), file=sys.stderr)
    print(f"{'PASS' if report.overall else 'FAIL'}: {len(report.checks) - len(failed)}/{len(report.checks)} checks; "
          f"report written to {path}")
    return EXIT_OK if report.overall else EXIT_VERIFY


# --------------------------------------------------------------------------


def build_parser():
    ap = _Parser(prog="mcvwave", description="Travelling waves of hyperbolic heat conduction with "
                                             "temperature-dependent coefficients.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    m = sub.add_parser("material", help="admissibility report and dimensionless parameters")
    m.add_argument("--config", required=True, metavar="PATH")
    m.add_argument("--t-lo", type=float, default=None, help="default: T0")
    m.add_argument("--t-hi", type=float, default=None, help="default: T_end")
    m.add_argument("--out", metavar="PATH", help="also write the JSON report here")

    s = sub.add_parser("soliton", help="sample an exact profile to CSV")
    s.add_argument("--case", choices=list(CASES), default="n2-tanh")
    s.add_argument("--xi-min", type=float)
    s.add_argument("--xi-max", type=float)
    s.add_argument("--samples", type=_positive_int)
    s.add_argument("--out", metavar="PATH", help="CSV path (default: <case>.csv)")
    _add_param_flags(s)

    r = sub.add_parser("simulate", help="run the finite-volume solver from an exact profile")
    r.add_argument("--case", choices=list(CASES), default="case11-implicit")
    r.add_argument("--nx", type=_positive_int)
    r.add_argument("--cfl", type=_cfl, default=0.5)
    r.add_argument("--t-end", type=float)
    r.add_argument("--bc", choices=("fixed", "periodic"), default="fixed")
    r.add_argument("--x-min", type=float)
    r.add_argument("--x-max", type=float)
    r.add_argument("--n-out", type=_positive_int, default=1, help="number of output times after t=0")
    r.add_argument("--max-wall", type=float, default=None, help="wall-clock budget in seconds")
    r.add_argument("--out", metavar="PREFIX", help="output prefix (default: sim_<case>)")
    _add_param_flags(r)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("suite", help="quadrature, residuals, constraints, permanence or all")
    v.add_argument("--tol", action="append", metavar="NAME=VALUE")
    v.add_argument("--out", metavar="PATH", help="report path (default: verify_report.json)")
    v.add_argument("--jobs", type=_positive_int, default=1)
    v.add_argument("--case", choices=("front", "soliton"), default="front",
                   help="permanence target: the (1, 1) travelling front or the default n2 soliton")
    return ap


COMMANDS = {"material": cmd_material, "soliton": cmd_soliton, "simulate": cmd_simulate, "verify": cmd_verify}


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"mcvwave: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.cmd](args, argv)
    except InadmissibleMaterial as exc:
        print(f"inadmissible material: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    except ConstraintViolation as exc:
        hint = f"; try --case {exc.suggestion}" if exc.suggestion else ""
        print(f"constraint violation: {exc}{hint}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except (SolverFailure, HyperbolicityError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ConfigError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
