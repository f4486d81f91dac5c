"""Command-line front end.

Exit codes: 0 when everything requested passed, 1 for hard failures
(including exactness mismatches under ``verify``), 2 for invalid usage.
"""

import argparse
import logging
import math
import sys

from . import harness
from .arith import factorize, build_prime_table, pi_ap
from .counting import (
    count_A,
    count_A_shifted,
    count_H,
    count_H_shifted,
    count_H_shifted_window,
)
from .errors import InvalidArgumentError
from .estimators import (
    derive_params,
    ford_order,
    phi_ratio_main_with_interval,
    phi_ratio_sum,
    shifted_main,
    tenenbaum_main,
)
from .intervals import (
    decompose_pairs,
    divisor_log_union,
    sum_L_density,
    vitali_subcover,
)
from .weights import (
    convolve_unit_array,
    lower_beta_weights,
    sifted_indicator_array,
    upper_beta_weights,
)

import numpy as np


def _global_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--x", type=float)
    p.add_argument("--y", type=float)
    p.add_argument("--z", type=float)
    p.add_argument("--s", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--limit", type=int)
    p.add_argument("--cache-dir")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--budget-mb", type=int, default=2048)


def _require(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise InvalidArgumentError(
            "missing required flag(s): " + " ".join(f"--{n}" for n in missing))


def _table_for(args, needed: int):
    limit = args.limit if args.limit is not None else needed
    if limit < needed:
        raise InvalidArgumentError(f"--limit {limit} below required {needed}")
    return harness.get_prime_table(limit, args.cache_dir, args.budget_mb)


def _emit(lines, args) -> None:
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _kv(key, value):
    if isinstance(value, float):
        return f"{key}={value:.15g}"
    return f"{key}={value}"


# ------------------------------------------------------------------ handlers

def _cmd_count_h(args):
    _require(args, "x", "y", "z")
    r = count_H(int(args.x), args.y, args.z, budget_mb=args.budget_mb)
    _emit([_kv("count", r.count), _kv("method", r.method)], args)
    return 0


def _cmd_count_hs(args):
    _require(args, "x", "y", "z", "s")
    x = int(args.x)
    table = _table_for(args, x + abs(args.s))
    r = count_H_shifted(x, args.y, args.z, args.s, table,
                        budget_mb=args.budget_mb)
    _emit([_kv("count", r.count), _kv("method", r.method)], args)
    return 0


def _cmd_count_window(args):
    _require(args, "x", "delta", "y", "z", "s")
    x = int(args.x)
    table = _table_for(args, x + abs(args.s))
    r = count_H_shifted_window(x, int(args.delta), args.y, args.z, args.s,
                               table)
    _emit([_kv("count", r.count), _kv("method", r.method)], args)
    return 0


def _cmd_count_table(args):
    _require(args, "n")
    lines = [_kv("A", count_A(args.n, budget_mb=args.budget_mb))]
    if args.s is not None:
        table = _table_for(args, args.n * args.n + abs(args.s))
        lines.append(_kv("A_shifted",
                         count_A_shifted(args.n, args.s, table,
                                         budget_mb=args.budget_mb)))
    _emit(lines, args)
    return 0


def _cmd_count_pi_ap(args):
    _require(args, "x", "q", "a")
    x = int(args.x)
    table = _table_for(args, x)
    _emit([_kv("count", pi_ap(x, args.q, args.a, table))], args)
    return 0


def _cmd_measure_l(args):
    _require(args, "a", "sigma")
    table = build_prime_table(max(2, int(math.isqrt(args.a)) + 1))
    u = divisor_log_union(factorize(args.a, table), args.sigma)
    lines = [_kv("measure", u.measure), _kv("parts", len(u.parts))]
    for left, right in u.parts:
        lines.append(f"part={left:.15g},{right:.15g}")
    _emit(lines, args)
    return 0


def _cmd_measure_pairs(args):
    _require(args, "a", "eta")
    table = build_prime_table(max(2, int(math.isqrt(args.a)) + 1))
    d = decompose_pairs(factorize(args.a, table), args.eta)
    lines = [_kv("pairs", len(d.pairs))]
    for d1, d2 in d.pairs:
        lines.append(f"pair={d1},{d2}")
    _emit(lines, args)
    return 0


def _cmd_measure_vitali(args):
    _require(args, "intervals")
    try:
        ivs = []
        for chunk in args.intervals.split(";"):
            left, right = chunk.split(",")
            ivs.append((float(left), float(right)))
    except ValueError as exc:
        raise InvalidArgumentError(f"bad --intervals: {exc}") from exc
    chosen = vitali_subcover(ivs)
    _emit([_kv("selected", " ".join(map(str, chosen)))], args)
    return 0


def _cmd_measure_density(args):
    _require(args, "w", "eta")
    total = sum_L_density(args.w, args.eta, weight=args.weight,
                          squarefree=not args.all,
                          coprime_to=args.coprime_to)
    _emit([_kv("sum", total)], args)
    return 0


def _weights_of(kind, args):
    if kind == "lower":
        return lower_beta_weights(args.d, args.z)
    return upper_beta_weights(args.d, args.z)


def _cmd_weights_dump(kind):
    def run(args):
        _require(args, "z", "d")
        w = _weights_of(kind, args)
        _emit(w.dump_support().splitlines(), args)
        return 0

    return run


def _cmd_weights_check(args):
    _require(args, "z", "d")
    n_max = int(args.limit) if args.limit is not None else 100_000
    lo = convolve_unit_array(lower_beta_weights(args.d, args.z), n_max)[1:]
    hi = convolve_unit_array(upper_beta_weights(args.d, args.z), n_max)[1:]
    ind = sifted_indicator_array(args.z, n_max)[1:].astype(np.int64)
    bad = (lo > ind) | (ind > hi) | ((ind == 1) & ((lo != 1) | (hi != 1)))
    n_bad = int(np.count_nonzero(bad))
    _emit([_kv("checked", n_max), _kv("violations", n_bad)], args)
    return 0 if n_bad == 0 else 1


def _cmd_estimate_params(args):
    _require(args, "y", "z")
    p = derive_params(args.y, args.z)
    lines = [_kv("eta", p.eta), _kv("u", p.u), _kv("z0", p.z0)]
    if p.beta is not None:
        lines.append(_kv("beta", p.beta))
    if p.xi is not None:
        lines.append(_kv("xi", p.xi))
    _emit(lines, args)
    return 0


def _cmd_estimate_ford(args):
    _require(args, "x", "y", "z")
    _emit([_kv("order", ford_order(args.x, args.y, args.z))], args)
    return 0


def _cmd_estimate_main(args):
    _require(args, "x", "y", "z")
    if args.s is not None:
        value = shifted_main(args.x, args.y, args.z, args.s)
    else:
        value = tenenbaum_main(args.x, args.y, args.z)
    _emit([_kv("main", value)], args)
    return 0


def _cmd_estimate_phisum(args):
    _require(args, "a", "s", "x")
    value, half_width = phi_ratio_main_with_interval(
        args.a, args.s, args.x, args.cutoff)
    lhs = phi_ratio_sum(args.a, args.s, args.x, budget_mb=args.budget_mb)
    _emit([_kv("sum", lhs), _kv("main", value),
           _kv("main_half_width", half_width)], args)
    return 0


def _cmd_verify(args):
    overrides = {}
    grid = {}
    if args.x is not None:
        grid["x"] = int(args.x)
    if args.experiment == "large-eta":
        if args.y is not None:
            grid["y"] = args.y
        if args.z is not None:
            grid["z"] = args.z
        if args.s is not None:
            grid["s_list"] = [args.s]
    if grid:
        overrides["grid"] = grid
    spec = harness.default_spec(
        args.experiment, seed=args.seed, budget_mb=args.budget_mb,
        threads=args.threads, cache_dir=args.cache_dir, **overrides)
    rows = harness.run_experiment(spec)
    doc = harness.emit_report(rows, format=args.format, path=args.out)
    if args.out is None:
        sys.stdout.write(doc)
    exact = spec.name in harness.EXACT_EXPERIMENTS
    failed = exact and any(r.verdict != "pass" for r in rows)
    truncated = any(r.params.get("truncated") for r in rows)
    return 1 if (failed or truncated) else 0


# ------------------------------------------------------------------ wiring

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="dspl",
        description="Count and estimate integers (and shifted primes) with a "
                    "divisor in a prescribed interval.")
    sub = top.add_subparsers(dest="command", required=True)

    count = sub.add_parser("count", help="exact counters").add_subparsers(
        dest="subcommand", required=True)
    p = count.add_parser("h", help="integers n <= x with a divisor in (y, z]")
    _global_flags(p)
    p.set_defaults(fn=_cmd_count_h)
    p = count.add_parser("hs", help="same, n restricted to shifted primes p + s")
    _global_flags(p)
    p.set_defaults(fn=_cmd_count_hs)
    p = count.add_parser("window", help="shifted-prime count over (x - delta, x]")
    _global_flags(p)
    p.set_defaults(fn=_cmd_count_window)
    p = count.add_parser("table", help="distinct products a*b with a, b <= N")
    _global_flags(p)
    p.add_argument("--n", type=int)
    p.set_defaults(fn=_cmd_count_table)
    p = count.add_parser("pi-ap", help="primes p <= x with p = a (mod q)")
    _global_flags(p)
    p.add_argument("--q", type=int)
    p.add_argument("--a", type=int)
    p.set_defaults(fn=_cmd_count_pi_ap)

    measure = sub.add_parser(
        "measure", help="divisor log-interval measures").add_subparsers(
        dest="subcommand", required=True)
    p = measure.add_parser("L", help="measure of union of [log d - sigma, log d)")
    _global_flags(p)
    p.add_argument("--a", type=int)
    p.add_argument("--sigma", type=float)
    p.set_defaults(fn=_cmd_measure_l)
    p = measure.add_parser("pairs", help="consecutive-divisor pair decomposition")
    _global_flags(p)
    p.add_argument("--a", type=int)
    p.add_argument("--eta", type=float)
    p.set_defaults(fn=_cmd_measure_pairs)
    p = measure.add_parser("vitali", help="greedy disjoint subcover, 3x dilation")
    _global_flags(p)
    p.add_argument("--intervals", help='semicolon-separated "l,r" pairs')
    p.set_defaults(fn=_cmd_measure_vitali)
    p = measure.add_parser("density", help="sum of L(a; eta)/a over a <= w")
    _global_flags(p)
    p.add_argument("--w", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--weight", choices=["reciprocal", "reciprocal_phi"],
                   default="reciprocal")
    p.add_argument("--all", action="store_true",
                   help="include non-squarefree a")
    p.add_argument("--coprime-to", type=int, default=1)
    p.set_defaults(fn=_cmd_measure_density)

    weights = sub.add_parser(
        "weights", help="combinatorial sieve weights").add_subparsers(
        dest="subcommand", required=True)
    for kind in ("lower", "upper"):
        p = weights.add_parser(kind, help=f"{kind} weights, support dump")
        _global_flags(p)
        p.add_argument("--d", type=float, help="level of support D")
        p.set_defaults(fn=_cmd_weights_dump(kind))
    p = weights.add_parser("check", help="exhaustive sandwich check up to --limit")
    _global_flags(p)
    p.add_argument("--d", type=float, help="level of support D")
    p.set_defaults(fn=_cmd_weights_check)

    estimate = sub.add_parser(
        "estimate", help="asymptotic references").add_subparsers(
        dest="subcommand", required=True)
    p = estimate.add_parser("params", help="derived parameters for (y, z)")
    _global_flags(p)
    p.set_defaults(fn=_cmd_estimate_params)
    p = estimate.add_parser("ford", help="order-of-magnitude bracket for H")
    _global_flags(p)
    p.set_defaults(fn=_cmd_estimate_ford)
    p = estimate.add_parser("main", help="first-order main term")
    _global_flags(p)
    p.set_defaults(fn=_cmd_estimate_main)
    p = estimate.add_parser("phisum", help="totient-ratio sum and its main term")
    _global_flags(p)
    p.add_argument("--a", type=int)
    p.add_argument("--cutoff", type=int, default=1_000_000)
    p.set_defaults(fn=_cmd_estimate_phisum)

    p = sub.add_parser("verify", help="run a named experiment, emit a report")
    p.add_argument("experiment", choices=list(harness.EXPERIMENT_NAMES))
    _global_flags(p)
    p.set_defaults(fn=_cmd_verify)

    return top


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except InvalidArgumentError as exc:
        print(f"dspl: invalid arguments: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"dspl: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
