"""Command-line front end: tables, scans, transform application, checks.

All numbers print with 17 significant digits and rows are emitted in a
fixed order, so identical flags give byte-identical output.  Lines that
begin with '#' carry metadata (dimensions, lambda mode, located roots)
and can be skipped by plotting tools.  Exit codes: 0 success, 1 a
property run reported failures, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .extremal import (
    BracketFailure,
    BracketInvalid,
    OneRootCase,
    StationarityFailure,
    a_bracket,
    big_g,
    roots_of_m,
    solve_lambda,
)
from .logdomain import log_sub_signed
from .profile import (
    evaluation_grid,
    from_radius,
    j_transform,
    legendre,
    polarity,
    profile_from_dict,
    profile_to_dict,
    to_radius,
)
from .verify import SUITE_NAMES, ProfileSampler, run_suite

_SOLVER_ERRORS = (BracketFailure, StationarityFailure, OneRootCase)


def _fmt(x: float) -> str:
    return "%.17g" % x


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _profile_json(p) -> str:
    return json.dumps(profile_to_dict(p), sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# flag parsing helpers


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 bits, got {text}")
    return value


def _range_pair(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"non-numeric range {text!r}") from exc
    if not (0.0 < lo < hi < math.inf):
        raise argparse.ArgumentTypeError(f"need 0 < LO < HI, got {text!r}")
    return lo, hi


def _lambda_mode(text: str) -> str:
    if text in ("factorial", "solved"):
        return text
    try:
        float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected 'factorial', 'solved' or a log value, got {text!r}"
        ) from exc
    return text


# ---------------------------------------------------------------------------
# commands


def _cmd_lambda_table(args) -> int:
    if args.n_max > 1000:
        return _fail("lambda-table supports n up to 1000")
    if args.n_min > args.n_max:
        return _fail(f"empty range: n-min {args.n_min} > n-max {args.n_max}")
    fields = (
        "n", "log_lambda", "excess", "r_n", "a_n", "n_a_n",
        "residual_n1", "residual_n2",
    )
    rows: list[tuple[int, object]] = []
    broken = False
    for n in range(args.n_min, args.n_max + 1):
        try:
            rows.append((n, solve_lambda(n)))
        except _SOLVER_ERRORS as exc:
            if not args.keep_going:
                return _fail(f"solver failed at n={n}: {exc}")
            broken = True
            rows.append((n, f"{type(exc).__name__}: {exc}"))
    if args.format == "csv":
        lines = ["# columns: " + ",".join(fields)]
        for n, est in rows:
            if isinstance(est, str):
                lines.append(f"{n},error,{est.replace(',', ';')}")
                continue
            values = (
                est.log_lambda,
                est.lambda_hat_minus_1,
                n * est.lambda_hat_minus_1,
                est.a_n,
                n * est.a_n,
                est.residual_n1,
                est.residual_n2,
            )
            lines.append(",".join([str(n)] + [_fmt(v) for v in values]))
        text = "\n".join(lines) + "\n"
    else:
        docs = []
        for n, est in rows:
            if isinstance(est, str):
                docs.append({"n": n, "error": est})
                continue
            docs.append({
                "n": n,
                "log_lambda": est.log_lambda,
                "excess": est.lambda_hat_minus_1,
                "r_n": n * est.lambda_hat_minus_1,
                "a_n": est.a_n,
                "n_a_n": n * est.a_n,
                "residual_n1": est.residual_n1,
                "residual_n2": est.residual_n2,
            })
        text = json.dumps({"rows": docs}, sort_keys=True, indent=2) + "\n"
    _emit(text, args.out)
    return 2 if broken else 0


def _cmd_maximizer(args) -> int:
    try:
        est = solve_lambda(args.n)
    except _SOLVER_ERRORS as exc:
        return _fail(f"solver failed at n={args.n}: {exc}")
    doc = {
        "n": est.n,
        "log_lambda": est.log_lambda,
        "a_n": est.a_n,
        "bracket": list(est.bracket),
        "residual_n1": est.residual_n1,
        "residual_n2": est.residual_n2,
        "lambda_hat_minus_1": est.lambda_hat_minus_1,
        "multiple_local_maxima": est.multiple_local_maxima,
        "tent": {"a": est.a_n, "b": "inf", "x0": 1.0},
    }
    _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.out)
    return 0


def _resolve_log_lambda(mode: str, n: int) -> float:
    if mode == "factorial":
        return math.lgamma(n + 1)
    if mode == "solved":
        return solve_lambda(n).log_lambda
    return float(mode)


def _cmd_scan_m(args) -> int:
    n = args.n
    try:
        log_lambda = _resolve_log_lambda(args.lam, n)
    except _SOLVER_ERRORS as exc:
        return _fail(f"solver failed at n={n}: {exc}")
    lo, hi = args.range if args.range else (1e-3, 1e3)
    lines = [f"# n={n} lambda={args.lam} log_lambda={_fmt(log_lambda)}"]
    try:
        roots = roots_of_m(n, log_lambda)
        lines.append(
            f"# roots: z1={_fmt(roots.z1)} z2={_fmt(roots.z2)} z3={_fmt(roots.z3)}"
        )
    except OneRootCase as exc:
        lines.append(f"# roots: OneRootCase ({exc})")
    lines.append("# columns: z,sign_m,log_abs_m")
    for z in np.geomspace(lo, hi, args.points):
        z = float(z)
        decay = -1.0 / z - (n + 2) * math.log(z)
        sign, log_abs = log_sub_signed(decay, log_lambda - z)
        lines.append(f"{_fmt(z)},{sign},{_fmt(log_abs)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_scan_g(args) -> int:
    n = args.n
    if args.alpha is not None:
        try:
            lo, hi = a_bracket(n, args.alpha)
        except (BracketInvalid, ValueError) as exc:
            return _fail(f"alpha window rejected: {exc}")
    elif args.range:
        lo, hi = args.range
    else:
        try:
            seed = roots_of_m(n, math.lgamma(n + 1))
        except OneRootCase as exc:
            return _fail(f"no scan bracket at lambda = n! for n={n}: {exc}")
        lo, hi = seed.z1, seed.z2
    grid = [float(a) for a in np.geomspace(lo, hi, args.points)]
    vals = [big_g(a, n) for a in grid]
    best = max(range(len(grid)), key=vals.__getitem__)
    log_factorial = math.lgamma(n + 1)
    lines = [
        f"# n={n} range={_fmt(lo)}:{_fmt(hi)}",
        f"# argmax: a={_fmt(grid[best])} log_g={_fmt(vals[best])}",
        "# columns: a,log_g,excess",
    ]
    for a, v in zip(grid, vals):
        lines.append(f"{_fmt(a)},{_fmt(v)},{_fmt(math.expm1(v - log_factorial))}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_transform(args) -> int:
    if args.input is None:
        raw = sys.stdin.read()
    else:
        path = Path(args.input)
        if not path.exists():
            return _fail(f"no such file: {args.input}")
        raw = path.read_text()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        return _fail(
            f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        )
    try:
        p = profile_from_dict(doc)
    except ValueError as exc:
        return _fail(f"invalid profile: {exc}")
    if args.op == "J":
        _emit(_profile_json(from_radius(j_transform(to_radius(p)))), args.out)
        return 0
    if args.op == "L":
        _emit(_profile_json(legendre(p)), args.out)
        return 0
    lo, hi = args.range if args.range else (1e-3, 1e3)
    lines = [f"# polarity sampled on [{_fmt(lo)}, {_fmt(hi)}]", "# columns: s,polar"]
    for s in evaluation_grid(lo, hi, args.points):
        lines.append(f"{_fmt(s)},{_fmt(polarity(p, s))}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_check(args) -> int:
    names = SUITE_NAMES if args.suite == "all" else (args.suite,)
    sampler_for = (
        (lambda name: ProfileSampler(args.seed)) if args.seed is not None
        else (lambda name: None)
    )
    reports = [
        run_suite(name, sampler_for(name), args.cases) for name in sorted(names)
    ]
    doc = {
        "passed": all(r.passed for r in reports),
        "suites": [r.to_dict() for r in reports],
    }
    _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.out)
    return 0 if doc["passed"] else 1


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epidual",
        description="Tables, scans and property checks for the tent-ratio solver.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    table = sub.add_parser("lambda-table", help="solved constants for a range of n")
    table.add_argument("--n-min", type=_positive_int, default=1)
    table.add_argument("--n-max", type=_positive_int, default=100)
    table.add_argument("--format", choices=("csv", "json"), default="csv")
    table.add_argument("--out", default=None)
    table.add_argument("--keep-going", action="store_true")
    table.set_defaults(func=_cmd_lambda_table)

    maxi = sub.add_parser("maximizer", help="solver output for one n as JSON")
    maxi.add_argument("--n", type=_positive_int, required=True)
    maxi.add_argument("--out", default=None)
    maxi.set_defaults(func=_cmd_maximizer)

    scan_m = sub.add_parser("scan-m", help="sign map scan as CSV")
    scan_m.add_argument("--n", type=_positive_int, required=True)
    scan_m.add_argument("--lambda", dest="lam", type=_lambda_mode, default="factorial")
    scan_m.add_argument("--range", type=_range_pair, default=None)
    scan_m.add_argument("--points", type=_positive_int, default=2000)
    scan_m.add_argument("--out", default=None)
    scan_m.set_defaults(func=_cmd_scan_m)

    scan_g = sub.add_parser("scan-g", help="capped-tent objective scan as CSV")
    scan_g.add_argument("--n", type=_positive_int, required=True)
    scan_g.add_argument("--alpha", type=float, default=None)
    scan_g.add_argument("--range", type=_range_pair, default=None)
    scan_g.add_argument("--points", type=_positive_int, default=400)
    scan_g.add_argument("--out", default=None)
    scan_g.set_defaults(func=_cmd_scan_g)

    trans = sub.add_parser("transform", help="apply J, L or A to a profile JSON")
    trans.add_argument("op", choices=("J", "L", "A"))
    trans.add_argument("input", nargs="?", default=None, help="path, or stdin")
    trans.add_argument("--range", type=_range_pair, default=None)
    trans.add_argument("--points", type=_positive_int, default=200)
    trans.add_argument("--out", default=None)
    trans.set_defaults(func=_cmd_transform)

    check = sub.add_parser("check", help="run property suites and report JSON")
    check.add_argument("suite", nargs="?", default="all", choices=("all", *SUITE_NAMES))
    check.add_argument("--seed", type=_seed, default=None)
    check.add_argument("--cases", type=_positive_int, default=None)
    check.add_argument("--out", default=None)
    check.set_defaults(func=_cmd_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    return args.func(args)


def console_main() -> None:
    raise SystemExit(main(sys.argv[1:]))
