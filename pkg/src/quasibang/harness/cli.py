"""Command line entry point ``qbang``.

Exit status: 0 all checks pass (inconclusive allowed), 1 some check
failed, 2 configuration or usage error, 3 runtime error.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys

import numpy as np

from .. import bang, funcmodel, sequences
from .config import ConfigError, load_config
from .report import ReportError, emit_report
from .runner import SuiteRuntimeError, run_suite
from .suites import SUITE_DESCRIPTIONS

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2, 3
SEED_ENV = "QB_SEED"
MAX_SEED = 2**64 - 1


def _json_arg(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--{what} is not valid JSON: {exc.msg}") from None


def _generator(text: str) -> sequences.Generator:
    spec = _json_arg(text, "generator")
    try:
        return sequences.Generator.from_dict(spec)
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"bad generator: {exc}") from None


def _sequence(gen: sequences.Generator, length: int) -> sequences.LogConvexSequence:
    count = length + 1
    if gen.table_length is not None:
        count = min(count, gen.table_length + 1)
    return sequences.from_generator(gen, count)


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise ConfigError(f"seed {text!r} is not an integer") from None
    if not 0 <= v <= MAX_SEED:
        raise ConfigError("seed must be an unsigned 64-bit integer")
    return v


def cmd_degree(args) -> int:
    gen = _generator(args.generator)
    if not 0.0 < args.sup_norm <= 1.0:
        raise ConfigError("--sup-norm must lie in (0, 1]")
    deg = bang.bang_degree(_sequence(gen, args.length), args.sup_norm)
    print(json.dumps(deg.to_dict(), sort_keys=True))
    return EXIT_OK


def cmd_profile(args) -> int:
    gen = _generator(args.generator)
    spec = _json_arg(args.function, "function")
    try:
        f = funcmodel.model_from_dict(spec)
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"bad function: {exc}") from None
    if args.grid < 2:
        raise ConfigError("--grid needs at least 2 points")
    seq = _sequence(gen, args.length)
    fit = funcmodel.fits_class(f, seq)
    if not fit.fits:
        print(f"warning: f does not fit the class (order {fit.worst_order}); scanning all orders", file=sys.stderr)
    grid = np.linspace(0.0, 1.0, args.grid)
    B = np.atleast_1d(bang.bang_norm(f, seq, grid, assume_member=fit.fits))
    profile = bang.BangProfile(grid, B, np.atleast_1d(bang.log_norm(B)))
    emit_report(profile, "csv", args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    config = load_config(args.config)
    seed = config.seed
    if os.environ.get(SEED_ENV):
        seed = _seed(os.environ[SEED_ENV])
    if args.seed is not None:
        seed = _seed(args.seed)
    if seed != config.seed:
        config = dataclasses.replace(config, seed=seed, raw={**config.raw, "seed": seed})
    report = run_suite(config, timing=args.timing)
    emit_report(report, args.format, args.out)
    s = report.summary
    print(f"pass {s['pass']}  fail {s['fail']}  inconclusive {s['inconclusive']}", file=sys.stderr)
    return EXIT_FAIL if report.failed else EXIT_OK


def cmd_construct(args) -> int:
    if not args.C > 0 or args.K < 10 or args.K % 2:
        raise ConfigError("need C > 0 and an even K >= 10")
    searched = funcmodel.find_nonextendable_constant(args.K)
    rows = []
    for n in range(21):
        lhs = math.log(funcmodel.coefficient_moment(args.C, args.K, n))
        rows.append({"n": n, "log_moment": lhs, "log_majorant": funcmodel.regularized_log_majorant(n)})
    out = {
        "C": args.C,
        "K": args.K,
        "searched_C": searched,
        "passes": all(r["log_moment"] <= r["log_majorant"] for r in rows),
        "c100_root": float(funcmodel.nonextendable_coefficient(args.C, 100)) ** 0.01,
        "moments": rows,
    }
    print(json.dumps(out, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_minorant(args) -> int:
    values = _json_arg(args.values, "values")
    if not isinstance(values, list) or not values:
        raise ConfigError("--values must be a non-empty JSON array")
    try:
        res = sequences.log_convex_minorant(values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    out = {"minorant": [float(v) for v in res.minorant.values], "contact_set": list(res.contact_set)}
    print(json.dumps(out, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qbang", description="Bang norms, Bang degree and Remez-type checks.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("degree", help="Bang degree of a class at a sup-norm level")
    d.add_argument("--generator", required=True, help="generator JSON, e.g. '{\"kind\":\"analytic\",\"C\":1.0}'")
    d.add_argument("--sup-norm", type=float, required=True)
    d.add_argument("--length", type=int, default=200, help="number of ratios to generate (default 200)")
    d.set_defaults(func=cmd_degree)

    pr = sub.add_parser("profile", help="B_f and L_f on a uniform grid, as CSV")
    pr.add_argument("--function", required=True, help="function JSON")
    pr.add_argument("--generator", required=True)
    pr.add_argument("--grid", type=int, required=True, help="number of grid points on [0, 1]")
    pr.add_argument("--out", default=None, help="CSV path (default stdout)")
    pr.add_argument("--length", type=int, default=200)
    pr.set_defaults(func=cmd_profile)

    suites = "\n".join(f"  {k:16s} {v}" for k, v in SUITE_DESCRIPTIONS.items())
    v = sub.add_parser(
        "verify",
        help="run verification suites from a config",
        epilog="suites:\n" + suites,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    v.add_argument("--config", required=True)
    v.add_argument("--seed", default=None, help=f"unsigned 64-bit seed; overrides {SEED_ENV} and the config")
    v.add_argument("--out", default=None)
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.add_argument("--timing", action="store_true", help="include wall times (output no longer byte-stable)")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("construct", help="explicit constructions")
    csub = c.add_subparsers(dest="what", required=True)
    ne = csub.add_parser("nonextendable", help="coefficient domination of the non-extendable series")
    ne.add_argument("--C", type=float, default=funcmodel.NONEXTENDABLE_C)
    ne.add_argument("--K", type=int, default=funcmodel.NONEXTENDABLE_K)
    ne.set_defaults(func=cmd_construct)

    m = sub.add_parser("minorant", help="largest log-convex minorant and contact set")
    m.add_argument("--values", required=True, help="JSON array of positive numbers")
    m.set_defaults(func=cmd_minorant)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SuiteRuntimeError, ReportError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (ValueError, ArithmeticError, IndexError, RuntimeError) as exc:
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
