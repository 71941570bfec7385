"""Command-line front end.

Examples::

    quadbound integrate --expr "exp(x)" --a 0 --b 1 --tol 1e-6
    quadbound bound --case C2 --expr "x^2/2" --a 0 --b 1 --x 0.5 --gamma 0 --Gamma 1
    quadbound hayashi --p "1-x" --h "x" --A 1 --a 0 --b 1
    quadbound audit --case C2 --family all --samples 100 --seed 42 --out r.json
    quadbound sharpness --cases all --a 0 --b 1 --out sharp.csv

Exit codes: 0 success, 2 input or precondition error, 3 budget or
convergence failure, 4 violation found (``audit``; also a failed
``hayashi`` bracket).
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings
from pathlib import Path

from . import auditor
from .core import Case, DerivativeBounds, Interval, as_case, case_bounds, evaluate_claim
from .errors import BudgetExhausted, NoConvergence, ParseError, QuadboundError
from .expr import derivative_range, function_model
from .families import family_by_name

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_VIOLATION = 0, 2, 3, 4

CONFIG_NAME = "quadbound.conf"
CONFIG_KEYS = {"tol": float, "samples": int, "seed": int, "threads": int, "inflation": float}
DEFAULTS = {"tol": None, "samples": 100, "seed": 0, "threads": os.cpu_count() or 1, "inflation": None}


class UsageError(Exception):
    pass


def read_config(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (s.strip() for s in line.partition("="))
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = CONFIG_KEYS[key](value)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad value {value!r} for {key}") from None
    return out


def _setting(args, key, builtin=None):
    """CLI flag, then config file, then built-in default."""
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in args.file_config:
        return args.file_config[key]
    return builtin if builtin is not None else DEFAULTS.get(key)


def _num(v) -> str:
    return format(float(v), ".6g")


def _emit(args, payload: dict, lines):
    if args.json:
        print(auditor.dumps(payload))
    else:
        for line in lines:
            print(line)


def _interval(args) -> Interval:
    try:
        return Interval(args.a, args.b)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_integrate(args) -> int:
    from .certquad import CertifyConfig, certify

    iv = _interval(args)
    g = function_model(args.expr, iv)
    tol = _setting(args, "tol", 1e-6)
    cfg = CertifyConfig(max_subintervals=args.max_sub, inflation=_setting(args, "inflation", 0.0))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BudgetExhausted)
        res = certify(g, iv, tol, cfg)
    payload = {
        "expr": args.expr, "a": iv.a, "b": iv.b, "tol": tol,
        "estimate": res.estimate, "radius": res.radius, "subintervals": res.subintervals,
        "evaluations": res.evaluations, "provenance": res.bound_provenance,
        "converged": res.converged,
    }
    _emit(args, payload, [
        f"estimate      {_num(res.estimate)}",
        f"radius        {_num(res.radius)}",
        f"subintervals  {res.subintervals}",
        f"provenance    {res.bound_provenance}",
    ] + ([] if res.converged else [f"budget exhausted: radius exceeds tol {_num(tol)}"]))
    if not res.converged:
        print(f"error: subinterval budget {args.max_sub} exhausted", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def _bounds_for(args, case, g, iv) -> DerivativeBounds:
    if (args.gamma is None) != (args.Gamma is None):
        raise UsageError("give both --gamma and --Gamma, or neither")
    if args.gamma is not None:
        try:
            return DerivativeBounds(args.gamma, args.Gamma, "asserted")
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if case.normalized:
        # checked against 0 <= g' <= b - a, so no widening
        return derivative_range(g.deriv_eval, iv, 1024, 0.0)
    return derivative_range(g.deriv_eval, iv, 1024, _setting(args, "inflation", 0.05))


def cmd_bound(args) -> int:
    from .oracle import mean_value

    case = as_case(args.case)
    iv = _interval(args)
    g = function_model(args.expr, iv)
    db = _bounds_for(args, case, g, iv)
    case_bounds(case, iv, db)
    tol = _setting(args, "tol", 1e-12)
    ev = evaluate_claim(case, g, iv, args.x, db, mean_value(g, iv, tol))
    violated = []
    if ev.slack_primary < -1e-12:
        violated.append("primary")
    if ev.slack_coarse < -1e-12:
        violated.append("coarse")
    payload = {**ev.as_dict(), "gamma": db.gamma, "Gamma": db.Gamma,
               "provenance": db.provenance, "violated": violated}
    lines = [
        f"case          {case.value}  [{case.status.value}]",
        f"lhs           {_num(ev.lhs)}",
        f"rule value    {_num(ev.rule_value)}",
        f"lambda        {_num(ev.lam)}",
        f"width primary {_num(ev.half_width_primary)}",
        f"width coarse  {_num(ev.half_width_coarse)}",
        f"slack         {_num(ev.slack_primary)} (primary)  {_num(ev.slack_coarse)} (coarse)",
        f"bounds        gamma={_num(db.gamma)} Gamma={_num(db.Gamma)} ({db.provenance})",
    ]
    if ev.bracket_low is not None:
        lines.append(f"bracket       [{_num(ev.bracket_low)}, {_num(ev.bracket_high)}]")
    if violated:
        lines.append(f"VIOLATION: stated bound fails ({', '.join(violated)})")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_hayashi(args) -> int:
    from .hayashi import check_hayashi

    iv = _interval(args)
    p, h = function_model(args.p, iv), function_model(args.h, iv)
    tol = _setting(args, "tol", 1e-10)
    rep = check_hayashi(p, h, args.A, iv, tol)
    t = rep.triple
    lo, hi = rep.margins
    _emit(args, rep.as_dict(), [
        f"lambda   {_num(t.lam)}",
        f"lower    {_num(t.lower)}",
        f"middle   {_num(t.middle)}",
        f"upper    {_num(t.upper)}",
        f"margins  {_num(lo)}  {_num(hi)}",
        "pass" if rep.passed else "FAIL",
    ])
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def cmd_audit(args) -> int:
    cfg = auditor.AuditConfig(
        samples=_setting(args, "samples"), seed=_setting(args, "seed"),
        x_grid=args.x_grid, steps=args.steps, threads=_setting(args, "threads"),
    )
    rep = auditor.audit(as_case(args.case), family_by_name(args.family), cfg)
    text = rep.to_csv() if args.csv else rep.to_json() + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}", file=sys.stderr)
    if args.json:
        print(rep.to_json())
    elif not args.out:
        sys.stdout.write(text)
    if not args.json:
        print(f"{rep.case.value} [{rep.status.value}] over {rep.family}: {rep.verdict} "
              f"(worst primary {_num(rep.worst_violation_primary)}, "
              f"coarse {_num(rep.worst_violation_coarse)})", file=sys.stderr)
    return EXIT_VIOLATION if rep.violated else EXIT_OK


def cmd_sharpness(args) -> int:
    iv = _interval(args)
    if args.cases.lower() == "all":
        cases = list(Case)
    else:
        cases = [as_case(c.strip()) for c in args.cases.split(",") if c.strip()]
    cfg = auditor.AuditConfig(samples=_setting(args, "samples", 200), seed=_setting(args, "seed"),
                              threads=_setting(args, "threads"))
    rows = auditor.sharpness_table(cases, iv, args.gamma, args.Gamma, cfg)
    text = auditor.sharpness_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}", file=sys.stderr)
    if args.json:
        print(auditor.dumps({"rows": [
            {"case": r.case.value, "status": r.case.status.value, "constant": r.constant,
             "scale": r.scale, "coarse_bound": r.coarse_bound,
             "observed_max_lhs": r.observed_max_lhs, "witness_x": r.witness.x,
             "witness": r.witness.description} for r in rows]}))
    elif not args.out:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quadbound", description=__doc__.split("\n\n")[0])
    ap.add_argument("--config", help=f"key = value file (default ./{CONFIG_NAME} if present)")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, json=True):
        if json:
            p.add_argument("--json", action="store_true", help="single JSON object on stdout")
        return p

    p = common(sub.add_parser("integrate", help="certified trapezoid integration"))
    p.add_argument("--expr", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--tol", type=float)
    p.add_argument("--max-sub", type=int, default=100_000)
    p.add_argument("--inflation", type=float)
    p.set_defaults(func=cmd_integrate)

    p = common(sub.add_parser("bound", help="evaluate one inequality case"))
    p.add_argument("--case", required=True, choices=[c.value for c in Case])
    p.add_argument("--expr", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--gamma", type=float)
    p.add_argument("--Gamma", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--inflation", type=float)
    p.set_defaults(func=cmd_bound)

    p = common(sub.add_parser("hayashi", help="check Hayashi's bracket"))
    p.add_argument("--p", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--A", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_hayashi)

    p = common(sub.add_parser("audit", help="search for counterexamples"))
    p.add_argument("--case", required=True, choices=[c.value for c in Case])
    p.add_argument("--family", required=True, choices=["canonical", "quadratic", "dprofile", "all"])
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--x-grid", type=int, default=65)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--out")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_audit)

    p = common(sub.add_parser("sharpness", help="coarse constants against observed deviations"))
    p.add_argument("--cases", default="all")
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--Gamma", type=float, default=1.0)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sharpness)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    json_mode = getattr(args, "json", False)

    def fail(code, message, **extra):
        print(f"error: {message}", file=sys.stderr)
        if json_mode:
            print(auditor.dumps({"error": message, **extra}))
        return code

    try:
        path = args.config or (CONFIG_NAME if Path(CONFIG_NAME).is_file() else None)
        args.file_config = read_config(path) if path else {}
        return args.func(args)
    except ParseError as exc:
        return fail(EXIT_INPUT, f"ParseError at position {exc.position}: {exc.message}",
                    kind="ParseError", position=exc.position)
    except NoConvergence as exc:
        return fail(EXIT_BUDGET, str(exc), kind="NoConvergence")
    except (QuadboundError, UsageError, OSError) as exc:
        return fail(EXIT_INPUT, f"{type(exc).__name__}: {exc}", kind=type(exc).__name__)


if __name__ == "__main__":
    raise SystemExit(main())
