"""Command-line front end: tables, parameter scans and verification reports.

Subcommands
-----------
stats       photon statistics of one state (single-row table)
phase-dist  phase distribution Q(theta) on a grid over one window
scan        sweep one parameter and tabulate chosen quantities
verify      run invariant suites, JSON report, exit 1 on failure
contract    contraction of plus philophase states toward coherent states

Data files are deterministic; run metadata (time, versions, runtime) goes
to a ``<output>.meta.json`` sidecar only.  Exit codes: 0 success, 1 failed
verification, 2 invalid input, 3 write failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import platform
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from fractions import Fraction

import numpy as np

from . import __version__
from .contraction import contraction_report
from .phase import PhaseSeriesError, phase_moments, q_theta
from .states import CutoffError, Family, InvalidStateError, StateSpec, parse_k
from .stats import photon_stats
from .uncertainty import DegenerateError, r_from_moments, u_from_moments, v_from_moments
from .verify import SCHEMA_VERSION, SUITES, verify_report

__all__ = ["main", "entry", "parse_complex", "spec_from_args", "UsageError"]

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_WRITE = 3

ZETA_CAP = 1.0 - 1e-6
QUANTITIES = ("mean_n", "var_n", "g2", "q_theta_profile", "var_phi", "var_cos", "V", "R1", "R2", "U")
SWEEPS = ("mod", "arg", "k", "sigma")
_PARAM_FLAG = {Family.SU11CS: "zeta", Family.GLAUBER: "alpha"}


class UsageError(ValueError):
    """Invalid command-line input; reported with exit code 2."""


class WriteError(OSError):
    """Output could not be written; reported with exit code 3."""


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` style literals (``i`` or ``j``), e.g. ``0.5+0i``, ``-2i``, ``3``."""
    cleaned = str(text).strip().replace(" ", "").lower().replace("i", "j")
    try:
        value = complex(cleaned)
    except ValueError:
        raise UsageError(f"cannot parse complex number {text!r}; use a+bi") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise UsageError(f"complex number must be finite, got {text!r}")
    return value


def _family(name: str) -> Family:
    try:
        return Family(name)
    except ValueError:
        raise UsageError(f"unknown family {name!r}; expected one of {', '.join(f.value for f in Family)}") from None


def _param_from_args(args, family: Family) -> complex:
    flag = _PARAM_FLAG.get(family, "z")
    for other in ("zeta", "z", "alpha"):
        if other != flag and getattr(args, other, None) is not None:
            raise UsageError(f"--{other} does not apply to family {family.value}; use --{flag}")
    literal = getattr(args, flag, None)
    if literal is not None and args.mod is not None:
        raise UsageError(f"give either --{flag} or --mod/--arg, not both")
    if literal is not None:
        if args.arg is not None:
            raise UsageError(f"--arg only combines with --mod, not --{flag}")
        return parse_complex(literal)
    if args.mod is None:
        if args.arg is not None:
            raise UsageError("--arg needs --mod")
        raise UsageError(f"family {family.value} needs --{flag} or --mod/--arg")
    if args.mod < 0:
        raise UsageError(f"--mod must be non-negative, got {args.mod}")
    arg = args.arg or 0.0
    return complex(args.mod * math.cos(arg), args.mod * math.sin(arg))


def spec_from_args(args, param: complex | None = None) -> StateSpec:
    """Build a :class:`StateSpec` from parsed state flags.

    Raises
    ------
    UsageError, InvalidStateError
        Missing or inconsistent flags, or a parameter outside the family's domain.
    """
    family = _family(args.family)
    if param is None:
        param = _param_from_args(args, family)
    needs_k = family in (Family.SU11CS, Family.BG)
    needs_sigma = family in (Family.PHILOPHASE_MINUS, Family.PHILOPHASE_PLUS)
    if needs_k and args.k is None:
        raise UsageError(f"family {family.value} needs --k (e.g. --k 1/2)")
    if not needs_k and args.k is not None:
        raise UsageError(f"--k does not apply to family {family.value}")
    if needs_sigma and args.sigma is None:
        raise UsageError(f"family {family.value} needs --sigma")
    if not needs_sigma and args.sigma is not None:
        raise UsageError(f"--sigma does not apply to family {family.value}")
    if family is Family.SU11CS:
        return StateSpec.su11cs(args.k, param)
    if family is Family.BG:
        return StateSpec.bg(args.k, param)
    if family is Family.PHILOPHASE_MINUS:
        return StateSpec.pminus(param, args.sigma)
    if family is Family.PHILOPHASE_PLUS:
        return StateSpec.pplus(param, args.sigma)
    return StateSpec.glauber(param)


# -- output ------------------------------------------------------------------


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _table_json(columns, rows, **header) -> str:
    records = [{c: (float(v) if isinstance(v, np.floating) else v) for c, v in zip(columns, row)} for row in rows]
    return _json_text({"schema_version": SCHEMA_VERSION, **header, "columns": list(columns), "rows": records})


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise WriteError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _write_sidecar(path: str | None, argv, started: float, extra: dict | None = None) -> None:
    if path is None or path == "-":
        return
    meta = {
        "created": datetime.now(timezone.utc).isoformat(),
        "argv": list(argv),
        "runtime_seconds": time.perf_counter() - started,
        "package_version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
    }
    meta.update(extra or {})
    _emit(_json_text(meta), path + ".meta.json")


def _output(args, columns, rows, **header) -> None:
    if args.format == "json":
        _emit(_table_json(columns, rows, **header), args.output)
    else:
        _emit(_csv_text(columns, rows), args.output)


def _spec_columns(spec: StateSpec):
    k = None if spec.k is None else str(spec.k)
    return [spec.family.value, k, spec.sigma, spec.param.real, spec.param.imag]


_SPEC_HEADER = ["family", "k", "sigma", "param_re", "param_im"]


# -- subcommands ---------------------------------------------------------------


def cmd_stats(args) -> tuple[int, dict]:
    spec = spec_from_args(args)
    stats = photon_stats(spec)
    note = "" if stats.g2_defined else "g2 undefined at the vacuum"
    if note:
        print(f"note: {note}", file=sys.stderr)
    columns = _SPEC_HEADER + ["mean_n", "mean_n2", "variance", "g2", "note"]
    row = _spec_columns(spec) + [stats.mean_n, stats.mean_n2, stats.variance, stats.g2, note]
    _output(args, columns, [row])
    return EXIT_OK, {}


def cmd_phase_dist(args) -> tuple[int, dict]:
    spec = spec_from_args(args)
    if args.points < 2:
        raise UsageError(f"--points must be at least 2, got {args.points}")
    theta0 = spec.mean_phase - math.pi if args.theta0 is None else args.theta0
    theta = theta0 + 2.0 * math.pi * np.arange(args.points) / args.points
    q = q_theta(spec, theta, args.method)
    rows = [[t, v] for t, v in zip(theta, q)]
    _output(args, ["theta", "q"], rows, state=spec.label(), theta0=theta0)
    return EXIT_OK, {}


def _sweep_values(args) -> list:
    if args.values:
        raw = list(args.values)
    else:
        if args.start is None or args.stop is None:
            raise UsageError("scan needs --values or --start and --stop")
        if args.steps < 1:
            raise UsageError(f"--steps must be positive, got {args.steps}")
        if args.spacing == "log":
            if args.start <= 0 or args.stop <= 0:
                raise UsageError("log spacing needs positive --start and --stop")
            raw = np.geomspace(args.start, args.stop, args.steps).tolist()
        else:
            raw = np.linspace(args.start, args.stop, args.steps).tolist()
    if args.sweep == "k":
        try:
            return [Fraction(parse_k(v), 2) for v in raw]
        except (ValueError, TypeError) as exc:
            raise UsageError(f"k sweep values must be half-integers >= 1/2: {exc}") from None
    if args.sweep == "sigma":
        out = []
        for v in raw:
            f = float(v)
            if f != round(f):
                raise UsageError(f"sigma sweep values must be integers, got {v}")
            out.append(int(round(f)))
        return out
    return [float(v) for v in raw]


def _scan_specs(args) -> tuple[list, list]:
    family = _family(args.family)
    values = _sweep_values(args)
    notes = []
    if args.sweep in ("mod", "arg"):
        if args.sweep == "mod":
            # the modulus is swept, so --mod is optional; the argument comes from --arg
            base_arg = args.arg or 0.0
            if args.mod is not None or getattr(args, _PARAM_FLAG.get(family, "z"), None) is not None:
                raise UsageError("a modulus sweep takes its direction from --arg only")
            params = []
            for v in values:
                if v < 0:
                    raise UsageError(f"moduli must be non-negative, got {v}")
                if family is Family.SU11CS and v > ZETA_CAP:
                    notes.append(f"|zeta|={v!r} capped at {ZETA_CAP!r}")
                    v = ZETA_CAP
                params.append(complex(v * math.cos(base_arg), v * math.sin(base_arg)))
        else:
            if args.arg is not None:
                raise UsageError("an argument sweep sets the argument itself; give only the modulus")
            r = abs(_param_from_args(args, family))
            params = [complex(r * math.cos(v), r * math.sin(v)) for v in values]
        return [spec_from_args(args, p) for p in params], notes
    param = _param_from_args(args, family)
    specs = []
    for v in values:
        sub = argparse.Namespace(**vars(args))
        if args.sweep == "k":
            sub.k = str(v)
        else:
            sub.sigma = v
        specs.append(spec_from_args(sub, param))
    return specs, notes


def _scan_point(task):
    spec, quantities, thetas = task
    out = {}
    problems = []
    stats = photon_stats(spec)
    moments = None
    if {"var_phi", "var_cos", "V", "R1", "R2", "U"} & set(quantities):
        try:
            moments = phase_moments(spec)
        except (PhaseSeriesError, CutoffError) as exc:
            problems.append(str(exc))
    for q in quantities:
        if q == "mean_n":
            out[q] = [stats.mean_n]
        elif q == "var_n":
            out[q] = [stats.variance]
        elif q == "g2":
            out[q] = [stats.g2]
        elif q == "q_theta_profile":
            try:
                out[q] = [float(v) for v in q_theta(spec, thetas)]
            except (PhaseSeriesError, CutoffError) as exc:
                problems.append(str(exc))
                out[q] = [None] * len(thetas)
        elif moments is None:
            out[q] = [None]
        elif q == "var_phi":
            out[q] = [moments.var_phi]
        elif q == "var_cos":
            out[q] = [moments.var_cos]
        elif q in ("R1", "R2"):
            r1, r2 = r_from_moments(stats, moments)
            out[q] = [r1 if q == "R1" else r2]
        else:
            fn = v_from_moments if q == "V" else u_from_moments
            try:
                out[q] = [fn(stats, moments)]
            except DegenerateError:
                out[q] = [None]
    return out, problems


def _parallel_map(fn, tasks, jobs: int):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    # map keeps input order whatever the completion order
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


def cmd_scan(args) -> tuple[int, dict]:
    quantities = [q.strip() for q in args.quantities.split(",") if q.strip()]
    unknown = [q for q in quantities if q not in QUANTITIES]
    if unknown or not quantities:
        raise UsageError(f"unknown quantities {unknown}; choose from {', '.join(QUANTITIES)}")
    if args.profile_points < 1:
        raise UsageError("--profile-points must be positive")
    specs, notes = _scan_specs(args)
    thetas = (-math.pi + 2.0 * math.pi * np.arange(args.profile_points) / args.profile_points).tolist()
    results = _parallel_map(_scan_point, [(s, quantities, thetas) for s in specs], args.jobs)
    columns = _SPEC_HEADER + ["swept_value"]
    for q in quantities:
        if q == "q_theta_profile":
            columns += [f"q_theta({t:.6f})" for t in thetas]
        else:
            columns.append(q)
    rows = []
    for spec, (values, problems) in zip(specs, results):
        swept = {"mod": spec.abs_param, "arg": spec.mean_phase, "k": str(spec.k), "sigma": spec.sigma}[args.sweep]
        row = _spec_columns(spec) + [swept]
        for q in quantities:
            row += values[q]
        rows.append(row)
        notes += [f"{spec.label()}: {p}" for p in problems]
    for n in notes:
        print(f"note: {n}", file=sys.stderr)
    _output(args, columns, rows, sweep=args.sweep, quantities=quantities)
    return EXIT_OK, {"notes": notes}


def cmd_contract(args) -> tuple[int, dict]:
    if args.values:
        sigmas = list(args.values)
    else:
        if args.steps < 1:
            raise UsageError(f"--steps must be positive, got {args.steps}")
        sigmas = sorted(set(int(round(v)) for v in np.linspace(args.start, args.stop, args.steps)))
    if any(s < 1 for s in sigmas):
        raise UsageError(f"contraction needs sigma >= 1, got {min(sigmas)}")
    reports = _parallel_map(contraction_report, sigmas, args.jobs)
    columns = ["sigma", "abs_z", "mean_ratio", "var_ratio", "g2_gap", "fidelity"]
    rows = [[getattr(r, c) for c in columns] for r in reports]
    _output(args, columns, rows)
    return EXIT_OK, {}


def cmd_verify(args) -> tuple[int, dict]:
    if args.cutoff < 4:
        raise UsageError(f"--cutoff must be at least 4, got {args.cutoff}")
    if args.tol is not None and not args.tol > 0:
        raise UsageError(f"--tol must be positive, got {args.tol}")
    report = verify_report(args.suite, args.cutoff, args.tol)
    _emit(_json_text(report), args.output)
    failed = [c["name"] for c in report["checks"] if not c["passed"]]
    for name in failed:
        print(f"FAILED: {name}", file=sys.stderr)
    summary = {"checks": len(report["checks"]), "failed": len(failed)}
    return (EXIT_FAILED if failed else EXIT_OK), summary


# -- parser -----------------------------------------------------------------------


def _state_flags(p: argparse.ArgumentParser, family_required: bool = True) -> None:
    g = p.add_argument_group("state")
    g.add_argument("--family", choices=[f.value for f in Family], default=None)
    g.add_argument("--k", help="Bargmann index as a fraction, e.g. 1/2")
    g.add_argument("--zeta", help="SU(1,1) coherent-state parameter, a+bi")
    g.add_argument("--z", help="Barut-Girardello or philophase parameter, a+bi")
    g.add_argument("--alpha", help="Glauber amplitude, a+bi")
    g.add_argument("--mod", type=float, help="modulus of the complex parameter")
    g.add_argument("--arg", type=float, help="argument of the complex parameter (radians)")
    g.add_argument("--sigma", type=int, help="philophase shift")


def _output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hpsu11", description="Photon states of the Holstein-Primakoff SU(1,1) realization.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="JSON file of default flag values; command-line flags win")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="photon statistics of one state")
    _state_flags(p)
    _output_flags(p)
    p.set_defaults(handler=cmd_stats)

    p = sub.add_parser("phase-dist", help="phase distribution Q(theta)")
    _state_flags(p)
    _output_flags(p)
    p.add_argument("--points", type=int, default=256)
    p.add_argument("--theta0", type=float, help="window start (default: mean phase - pi)")
    p.add_argument("--method", choices=("auto", "closed", "series"), default="auto")
    p.set_defaults(handler=cmd_phase_dist)

    p = sub.add_parser("scan", help="sweep one parameter")
    _state_flags(p)
    _output_flags(p)
    p.add_argument("--sweep", choices=SWEEPS, default="mod")
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--spacing", choices=("linear", "log"), default="linear")
    p.add_argument("--values", nargs="+", help="explicit sweep values (override --start/--stop)")
    p.add_argument("--quantities", default="mean_n,var_n,g2", help=f"comma-separated subset of {','.join(QUANTITIES)}")
    p.add_argument("--profile-points", type=int, default=16, help="angles for q_theta_profile")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(handler=cmd_scan)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("suite", nargs="?", choices=SUITES + ("all",), default="all")
    p.add_argument("--cutoff", type=int, default=64)
    p.add_argument("--tol", type=float, help="relative tolerance for closed form vs brute force")
    p.add_argument("--output", "-o", help="JSON report path (default stdout)")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("contract", help="contraction toward coherent states along |z| = 2 sigma")
    _output_flags(p)
    p.add_argument("--start", type=float, default=5)
    p.add_argument("--stop", type=float, default=50)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--values", type=int, nargs="+", help="explicit sigma values")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(handler=cmd_contract)
    return parser


def _load_config(path: str, parser: argparse.ArgumentParser, command: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            config = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(config, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    subparser = parser._subparsers._group_actions[0].choices[command]
    known = {a.dest for a in subparser._actions}
    unknown = sorted(set(config) - known)
    if unknown:
        raise UsageError(f"config keys not valid for {command}: {', '.join(unknown)}")
    return {key.replace("-", "_"): value for key, value in config.items()}


def main(argv=None) -> int:
    """Run the command line; returns the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    started = time.perf_counter()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.config:
            defaults = _load_config(args.config, parser, args.command)
            subparser = parser._subparsers._group_actions[0].choices[args.command]
            subparser.set_defaults(**defaults)
            args = parser.parse_args(argv)
        if getattr(args, "family", "") is None and args.command in ("stats", "phase-dist", "scan"):
            raise UsageError("--family is required")
        code, extra = args.handler(args)
        _write_sidecar(getattr(args, "output", None), argv, started, extra)
        return code
    except WriteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_WRITE
    except (UsageError, InvalidStateError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (CutoffError, PhaseSeriesError) as exc:
        # the requested point lies beyond what the cutoff ceiling resolves
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def entry() -> None:
    sys.exit(main())
