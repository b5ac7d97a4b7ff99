"""Command-line front end: ``eisenfact expand|verify|catalog|eval|transform-check``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import numeric
from .coeffring import complex_embed, format_coords
from .exprlang import (
    CatalogError,
    ExprSyntaxError,
    IdentityEntry,
    MalformedTransform,
    default_catalog_path,
    eval_constant,
    eval_exact,
    eval_numeric,
    load_catalog,
    parse_expr,
)
from .generators import UnknownGenerator, registry_for
from .qseries import EXACT
from .report import summarize, to_json_text
from .verifier import Config, run_entries, verify_entry

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fmt_exp(e: Fraction) -> str:
    if e.denominator == 1:
        return "q" if e == 1 else f"q^{e.numerator}"
    return f"q^{{{e.numerator}/{e.denominator}}}"


def format_expansion(s, fmt: str = "exact") -> str:
    """``1/6, q:1, q^2:0, ...`` over the full lattice of the series."""
    d = s.denom
    parts = []
    for m in range(min(s.low, 0), s.known_below):
        e = Fraction(m, d)
        c = s.coefficient(e)
        if fmt == "complex":
            z = complex_embed(c)
            text = f"{z.real:.12g}{z.imag:+.12g}i"
        elif fmt == "coords":
            text = format_coords(c)
        else:
            text = str(c)
        parts.append(text if e == 0 else f"{_fmt_exp(e)}:{text}")
    return ", ".join(parts)


def _rational(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _config(args) -> Config:
    return Config.from_env(
        min_depth=getattr(args, "depth", None),
        mode=getattr(args, "mode", None),
        seed=getattr(args, "seed", None),
        jobs=getattr(args, "jobs", None),
        primes=getattr(args, "primes", None),
        samples=getattr(args, "samples", None),
        transform_tol=getattr(args, "transform_tol", None),
        zero_tol=getattr(args, "zero_tol", None),
    )


def _emit(reports, args, out=None) -> int:
    out = out or sys.stdout
    summary = summarize(reports)
    if getattr(args, "out", None):
        try:
            Path(args.out).write_text(to_json_text(reports) + "\n", encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot write report: {exc}") from None
    if args.output == "json":
        print(to_json_text(reports), file=out)
    else:
        for r in sorted(reports, key=lambda r: r.id):
            print(r.human(), file=out)
        print(f"{summary['pass']}/{summary['total']} pass", file=out)
    return EXIT_OK if summary["fail"] == 0 and summary["error"] == 0 else EXIT_FAIL


def _find_entry(entry_id: str, catalog) -> IdentityEntry:
    path = catalog or default_catalog_path()
    for e in _load(path):
        if e.id == entry_id:
            return e
    raise UsageError(f"no entry {entry_id!r} in {path}")


def _load(path):
    try:
        return load_catalog(path)
    except OSError as exc:
        raise UsageError(f"cannot read catalog: {exc}") from None
    except CatalogError as exc:
        raise UsageError(f"catalog {path}: {exc}") from None


def cmd_expand(args) -> int:
    e = parse_expr(args.expr)
    s = eval_exact(e, args.depth)
    print(format_expansion(s, args.format))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.id:
        entry = _find_entry(args.id, args.catalog)
    elif args.expr:
        entry = IdentityEntry(id="cli", kind="exact-zero", level=args.level,
                              weight=args.weight, expr=parse_expr(args.expr))
    else:
        raise UsageError("give an expression or --id")
    return _emit([verify_entry(entry, _config(args))], args)


def cmd_catalog(args) -> int:
    path = args.path or default_catalog_path()
    entries = _load(path)
    reports, _ = run_entries(entries, _config(args))
    return _emit(reports, args)


def cmd_eval(args) -> int:
    if args.at is not None:
        tau = complex_embed(eval_constant(parse_expr(args.at)))
    else:
        tau = complex(args.tau[0], args.tau[1])
    if tau.imag <= 0:
        raise UsageError("tau must have positive imaginary part")
    e = parse_expr(args.expr)
    value = eval_numeric(e, tau, order=args.depth)
    if args.output == "json":
        print(json.dumps({"re": value.real, "im": value.imag, "abs": abs(value)}))
    else:
        print(f"{value.real:.15g}{value.imag:+.15g}i  (|value| = {abs(value):.6e})")
    return EXIT_OK


def cmd_transform_check(args) -> int:
    if args.id:
        entry = _find_entry(args.id, args.catalog)
        if entry.kind != "numeric-transform":
            raise UsageError(f"{args.id} is not a transformation law")
    elif args.lhs and args.rhs and args.multiplier:
        entry = IdentityEntry(id="cli", kind="numeric-transform", level=1, weight=Fraction(1),
                              lhs=parse_expr(args.lhs), rhs=parse_expr(args.rhs),
                              multiplier=parse_expr(args.multiplier))
    else:
        raise UsageError("give --id or all of --lhs, --rhs, --multiplier")
    rep = numeric.check_transform(entry, registry_for(EXACT), seed=args.seed, samples=args.samples,
                                  tol=args.transform_tol)
    return _emit([rep], args)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eisenfact", description="Exact q-expansions and identity verification.")
    p.add_argument("--cache-dir", help="directory for cached exact expansions")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, depth_default=None):
        sp.add_argument("--depth", type=_rational, default=depth_default)
        sp.add_argument("--output", choices=("human", "json"), default="human")

    sp = sub.add_parser("expand", help="print a q-expansion")
    sp.add_argument("expr")
    sp.add_argument("--depth", type=_rational, default=Fraction(10))
    sp.add_argument("--format", choices=("exact", "complex", "coords"), default="exact")
    sp.set_defaults(func=cmd_expand)

    def verifying(sp):
        common(sp)
        sp.add_argument("--mode", choices=("exact", "multimodular"))
        sp.add_argument("--primes", type=int)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--samples", type=int)
        sp.add_argument("--transform-tol", type=float)
        sp.add_argument("--zero-tol", type=float)
        sp.add_argument("--out", help="write the JSON report here")

    sp = sub.add_parser("verify", help="verify one identity")
    sp.add_argument("expr", nargs="?")
    sp.add_argument("--id", help="entry id from the catalog")
    sp.add_argument("--catalog")
    sp.add_argument("--level", type=int, default=1)
    sp.add_argument("--weight", type=_rational, default=Fraction(1))
    verifying(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("catalog", help="verify every entry of a catalog")
    sp.add_argument("path", nargs="?")
    sp.add_argument("--jobs", type=int, default=1)
    verifying(sp)
    sp.set_defaults(func=cmd_catalog)

    sp = sub.add_parser("eval", help="evaluate numerically at tau")
    sp.add_argument("expr")
    where = sp.add_mutually_exclusive_group(required=True)
    where.add_argument("--tau", nargs=2, type=float, metavar=("RE", "IM"))
    where.add_argument("--at", metavar="EXPR", help="exact point, e.g. '(1+sqrt(-3))/2'")
    common(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("transform-check", help="check a Fricke transformation law numerically")
    sp.add_argument("--id")
    sp.add_argument("--catalog")
    sp.add_argument("--lhs")
    sp.add_argument("--rhs")
    sp.add_argument("--multiplier")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=16)
    sp.add_argument("--transform-tol", type=float)
    sp.add_argument("--output", choices=("human", "json"), default="human")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_transform_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.cache_dir:
        from .cache import DiskCache

        try:
            registry_for(EXACT).disk_cache = DiskCache(args.cache_dir)
        except OSError as exc:
            print(f"error: cache directory: {exc}", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ExprSyntaxError, UnknownGenerator, MalformedTransform, CatalogError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ZeroDivisionError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
