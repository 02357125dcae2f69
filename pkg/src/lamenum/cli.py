"""Command-line interface.

Commands: count, singularity, sequences, asym, sample, profile, histogram,
boltzmann-probs, table.  Output is deterministic for fixed flags, seed and
precision.  Exit codes: 1 flag errors, 2 resource limits, 3 precision
alarms.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import mpmath
from mpmath import mp, mpf

from . import counting, radicals, sampling
from .errors import (
    ParseError,
    PrecisionError,
    ResourceLimitError,
    SingularitySearchError,
    UnsupportedFamilyError,
)
from .terms import Family, Kind, render

CACHE_ENV = "LAMENUM_CACHE_DIR"

_FAMILY_KINDS = sorted(
    [
        Kind.LAMBDA_ALL,
        Kind.LAMBDA_EXACT_UNARY,
        Kind.LAMBDA_AT_MOST_UNARY,
        Kind.LAMBDA_UNARY_HEIGHT,
        Kind.LAMBDA_BINDING_LENGTH,
        Kind.MOTZKIN,
        Kind.MOTZKIN_EXACT_UNARY,
        Kind.MOTZKIN_HEIGHT_EXACT,
        Kind.MOTZKIN_HEIGHT_AT_MOST,
    ]
)

# published reference values reproduced by `table --paper-table 2`:
# k -> (constant, exponential growth) for the two bounded families
TABLE2_UNARY_HEIGHT = {
    1: ("0.242613", "2"),
    2: ("0.520859", "2.90867"),
    3: ("0.231818", "3.62279"),
    4: ("0.0838137", "4.21545"),
    5: ("0.0265937", "4.73046"),
    6: ("0.0079582", "5.19117"),
    7: ("0.0025262", "5.61139"),
    8: ("9.31889e-5", "6"),
    9: ("1.56532e-4", "6.36386"),
    10: ("1.99134e-5", "6.70758"),
    133: ("2.16482e-152", "23.8258"),
    134: ("1.30921e-153", "23.9131"),
    135: ("8.56995e-157", "24"),
}
TABLE2_BINDING_LENGTH = {
    1: ("0.21851", "3"),
    2: ("0.0866674", "3.82843"),
    3: ("0.0245664", "4.4641"),
    4: ("0.00577152", "5"),
    5: ("0.0011921", "5.47214"),
    6: ("0.000223117", "5.89898"),
    7: ("0.0000385385", "6.2915"),
    8: ("6.21966e-6", "6.65685"),
    9: ("9.46315e-7", "7"),
    10: ("1.36666e-7", "7.32456"),
    133: ("2.55075e-157", "24.0651"),
    134: ("1.06018e-158", "24.1517"),
    135: ("4.3907e-160", "24.2379"),
}
TABLE2_DEFAULT_KS = sorted(TABLE2_UNARY_HEIGHT)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits 2 by default; the contract is 1
        raise UsageError(message)


def _family_from_args(args) -> Family:
    kind = args.family
    param = getattr(args, "q", None)
    if param is None:
        param = getattr(args, "k", None)
    if kind in (Kind.LAMBDA_ALL, Kind.MOTZKIN):
        if param is not None:
            raise UsageError(f"{kind} takes no --q/--k parameter")
        return Family(kind)
    if param is None:
        raise UsageError(f"{kind} needs --q or --k")
    try:
        return Family(kind, param)
    except ValueError as e:
        raise UsageError(str(e)) from e


def _cache_dir(args) -> Path | None:
    if args.cache_dir:
        return Path(args.cache_dir)
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None


def _cached_table(fam: Family, n: int, cache: Path | None) -> counting.CountTable:
    if cache is None:
        return counting.count_family(fam, n)
    cache.mkdir(parents=True, exist_ok=True)
    name = fam.label().replace("(", "_").replace(")", "") + f"_N{n}.json.gz"
    path = cache / name
    if path.exists():
        table = counting.load_table(path)
        if table.family == fam and table.max_size == n:
            return table
    table = counting.count_family(fam, n)
    counting.save_table(table, path)
    return table


def _print(args, text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_count(args) -> int:
    fam = _family_from_args(args)
    table = _cached_table(fam, args.max_size, _cache_dir(args))
    if args.format == "csv":
        _print(args, counting.export_csv(table))
    elif args.format == "json":
        doc = {
            "version": 1,
            "family": fam.kind,
            "params": fam.param,
            "counts": {str(n): str(table.count(n)) for n in range(1, args.max_size + 1)},
        }
        _print(args, json.dumps(doc, sort_keys=True))
    else:
        for n in range(1, args.max_size + 1):
            _print(args, f"{n}\t{table.count(n)}")
        if table.note:
            _print(args, f"# note: {table.note}")
    return 0


def _report_text(report, digits: int) -> str:
    lines = [
        f"family      {report.family.label()}",
        f"rho         {mpmath.nstr(report.rho, digits)}",
        f"growth      {mpmath.nstr(mpf(10) ** report.growth_log10, digits) if report.growth_log10 is not None else '-'}",
        f"theta       {report.theta}",
        f"block       {list(report.vanishing_block)}",
    ]
    if report.constant_log10 is not None:
        lines.append(f"constant    {report.constant_mantissa()}")
        lines.append(f"log10 const {mpmath.nstr(report.constant_log10, digits)}")
        lines.append(f"n exponent  {report.subexp_exponent}")
    if report.parity_note:
        lines.append(f"parity      {report.parity_note}")
    return "\n".join(lines)


def _cmd_singularity(args) -> int:
    fam = _family_from_args(args)
    report = radicals.asym_constant(fam, prec=args.precision)
    if args.format == "json":
        _print(args, json.dumps(report.to_json(), sort_keys=True))
    else:
        _print(args, _report_text(report, args.digits))
    return 0


def _cmd_sequences(args) -> int:
    rows = []
    for j in range(args.start, args.upto + 1):
        if args.name == "c" and j < 1:
            continue
        value = radicals.sequence(args.name, j, prec=args.precision)
        if isinstance(value, int):
            rows.append((j, str(value)))
        else:
            rows.append((j, mpmath.nstr(value, args.digits)))
    if args.format == "csv":
        _print(args, "j,value\n" + "\n".join(f"{j},{v}" for j, v in rows))
    else:
        for j, v in rows:
            _print(args, f"{args.name}_{j} = {v}")
    return 0


def _cmd_asym(args) -> int:
    fam = _family_from_args(args)
    n = args.n
    predicted = radicals.asym_estimate(fam, n, prec=args.precision)
    line = {"family": fam.label(), "n": n, "predicted_log10": predicted}
    if predicted == float("-inf"):
        _print(args, f"{fam.label()} n={n}: empty size class (parity)")
        return 0
    exact_log10 = None
    ratio = None
    if n <= args.table_limit:
        table = _cached_table(fam, n, _cache_dir(args))
        cnt = table.count(n)
        if cnt > 0:
            exact_log10 = float(mpmath.log10(cnt))
            ratio = 10 ** (exact_log10 - predicted)
    if args.format == "json":
        line.update({"exact_log10": exact_log10, "ratio": ratio})
        _print(args, json.dumps(line, sort_keys=True))
    else:
        out = f"{fam.label()} n={n}: predicted log10 = {predicted:.6f}"
        if exact_log10 is not None:
            out += f", exact log10 = {exact_log10:.6f}, exact/predicted = {ratio:.6f}"
        _print(args, out)
    return 0


def _cmd_sample(args) -> int:
    fam = _family_from_args(args)
    if args.method == "boltzmann":
        window = (args.window_min or args.size, args.window_max or args.size)
        x = None if args.x is None else mpf(args.x)
        spec = sampling.SamplerSpec(
            fam,
            args.size,
            method="boltzmann",
            seed=args.seed,
            x=x,
            window=window,
            max_attempts=args.max_attempts,
        )
        for i in range(args.count):
            res = sampling.sample_boltzmann(spec, i)
            if res.term is None:
                _print(
                    args,
                    f"# rejection budget exhausted: {res.attempts} attempts, "
                    f"{res.size_rejections} size rejections, {res.guard_aborts} guard aborts",
                )
                return 2
            _print(args, render(res.term, args.format))
        return 0
    spec = sampling.SamplerSpec(fam, args.size, seed=args.seed)
    table = _cached_table(fam, args.size, _cache_dir(args))
    for i in range(args.count):
        t = sampling.sample_recursive(spec, i, table)
        _print(args, render(t, args.format))
    return 0


def _cmd_profile(args) -> int:
    fam = _family_from_args(args)
    spec = sampling.SamplerSpec(fam, args.size, seed=args.seed)
    agg = sampling.aggregate_profiles(spec, args.batch)
    _print(args, agg.to_csv(args.by))
    return 0


def _cmd_histogram(args) -> int:
    hist = sampling.unary_height_histogram(args.size)
    lines = ["k,probability"]
    for k, p in enumerate(hist):
        with mp.workprec(args.precision):
            lines.append(f"{k},{mpmath.nstr(mpf(p.numerator) / p.denominator, args.digits)}")
    _print(args, "\n".join(lines))
    return 0


def _cmd_boltzmann_probs(args) -> int:
    fam = _family_from_args(args)
    x = None if args.x is None else mpf(args.x)
    probs = sampling.boltzmann_probabilities(fam, x, prec=args.precision)
    _print(args, probs.to_csv())
    return 0


def _cmd_table(args) -> int:
    if args.paper_table != 2:
        raise UsageError("only reference table 2 is reproducible")
    ks = TABLE2_DEFAULT_KS if not args.k_list else [int(s) for s in args.k_list.split(",")]
    header = (
        "k | height constant (published, rel err) | height growth | "
        "binding constant (published, rel err) | binding growth"
    )
    _print(args, header)
    worst = 0.0
    for k in ks:
        cells = []
        for fam, published in (
            (Family.lambda_unary_height(k), TABLE2_UNARY_HEIGHT.get(k)),
            (Family.lambda_binding_length(k), TABLE2_BINDING_LENGTH.get(k)),
        ):
            report = radicals.asym_constant(fam, prec=args.precision)
            ours_log10 = report.constant_log10
            growth = mpf(10) ** report.growth_log10
            if published is None:
                cells.append(f"{report.constant_mantissa()} (unpublished) {mpmath.nstr(growth, 8)}")
                continue
            pub_c, pub_g = published
            with mp.workprec(args.precision):
                pub_log10 = mpmath.log10(mpf(pub_c))
                rel = abs(mpf(10) ** (ours_log10 - pub_log10) - 1)
                rel_g = abs(growth / mpf(pub_g) - 1)
            worst = max(worst, float(rel), float(rel_g))
            cells.append(
                f"{report.constant_mantissa()} ({pub_c}, {mpmath.nstr(rel, 3)}) "
                f"{mpmath.nstr(growth, 8)} ({pub_g}, {mpmath.nstr(rel_g, 3)})"
            )
        _print(args, f"{k} | " + " | ".join(cells))
    _print(args, f"# worst relative error: {worst:.3e}")
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--precision", type=int, default=radicals.DEFAULT_PREC, help="bits, >= 64")
    p.add_argument("--digits", type=int, default=10, help="significant digits printed")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cache-dir", default=None, help=f"count-table cache (env {CACHE_ENV})")


def _add_family(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", required=True, choices=_FAMILY_KINDS)
    p.add_argument("--q", type=int, default=None, help="unary-count parameter")
    p.add_argument("--k", type=int, default=None, help="height/binding parameter")


def build_parser() -> _Parser:
    parser = _Parser(prog="lamenum", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="exact counts up to a size")
    _add_family(p)
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    _add_common(p)
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("singularity", help="dominant singularity report")
    _add_family(p)
    p.add_argument("--format", choices=["text", "json"], default="text")
    _add_common(p)
    p.set_defaults(func=_cmd_singularity)

    p = sub.add_parser("sequences", help="u, N, alpha, lambda, c sequences")
    p.add_argument("--name", required=True, choices=["u", "N", "alpha", "lambda", "c"])
    p.add_argument("--upto", type=int, required=True)
    p.add_argument("--start", type=int, default=1)
    p.add_argument("--format", choices=["text", "csv"], default="text")
    _add_common(p)
    p.set_defaults(func=_cmd_sequences)

    p = sub.add_parser("asym", help="predicted vs exact count at a size")
    _add_family(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--table-limit", type=int, default=2000, help="compute exact counts up to this size")
    p.add_argument("--format", choices=["text", "json"], default="text")
    _add_common(p)
    p.set_defaults(func=_cmd_asym)

    p = sub.add_parser("sample", help="random terms")
    _add_family(p)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--method", choices=["recursive", "boltzmann"], default="recursive")
    p.add_argument("--format", choices=["debruijn", "json", "dot"], default="debruijn")
    p.add_argument("--x", default=None, help="Boltzmann tuning (default: singular)")
    p.add_argument("--window-min", type=int, default=None)
    p.add_argument("--window-max", type=int, default=None)
    p.add_argument("--max-attempts", type=int, default=100_000)
    _add_common(p)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("profile", help="mean node-count profiles over a batch")
    _add_family(p)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--batch", type=int, default=100)
    p.add_argument("--by", choices=["depth", "unary"], default="depth")
    _add_common(p)
    p.set_defaults(func=_cmd_profile)

    p = sub.add_parser("histogram", help="unary-height distribution at a size")
    p.add_argument("--size", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_histogram)

    p = sub.add_parser("boltzmann-probs", help="per-level branch probabilities")
    _add_family(p)
    p.add_argument("--x", default=None, help="tuning (default: singular)")
    _add_common(p)
    p.set_defaults(func=_cmd_boltzmann_probs)

    p = sub.add_parser("table", help="reproduce the published constants table")
    p.add_argument("--paper-table", type=int, default=2)
    p.add_argument("--k-list", default=None, help="comma-separated k values")
    _add_common(p)
    p.set_defaults(func=_cmd_table)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "precision", 64) < 64:
            raise UsageError("--precision must be at least 64 bits")
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (ValueError, ParseError, UnsupportedFamilyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return 2
    except (PrecisionError, SingularitySearchError) as e:
        print(f"precision alarm: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
