"""Command-line interface: ``silverline <subcommand> ...``.

Exit codes: 0 success, 1 computation error (JSON error object on stderr),
2 usage error.  Decimal output is always truncated toward zero.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from fractions import Fraction
from importlib import resources

from . import dichotomy as dich
from .config import FORMATS, RunConfig
from .errors import SilverlineError
from .integers import (
    SigmaIntRep,
    enumerate_with_gaps,
    is_normal_form,
    to_normal_form,
    value_of,
)
from .matrices import (
    CompanionForm,
    companion,
    intertwiner,
    is_irreducible_matrix,
    is_primitive,
    perron,
    silver_primitivity_by_gcd,
)
from .numfield import FieldElement
from .pisot import is_pisot
from .polynomials import SilverPolynomial, count_real_roots, enumerate_silver_polynomials, factor
from .reals import AlgebraicReal, dresden_bounds, silver_number
from .tiling import (
    SubstitutionRule,
    detect_convergence,
    endpoints,
    limit_prefix,
    prototile_lengths,
    silver_rule,
)

TRUNCATION_NOTE = "decimals truncated toward zero"


class UsageError(Exception):
    pass


def _bits(text: str) -> SilverPolynomial:
    try:
        return SilverPolynomial.from_string(text)
    except (ValueError, SilverlineError) as exc:
        raise argparse.ArgumentTypeError(f"invalid silver polynomial bits {text!r}: {exc}")


def _degree(text: str) -> int:
    n = int(text)
    if n < 2:
        raise argparse.ArgumentTypeError("degree must be >= 2")
    return n


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _fraction(text: str) -> Fraction:
    q = Fraction(text)
    if q <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return q


def _coords(fe: FieldElement):
    return [f"{c.numerator}/{c.denominator}" for c in fe.coords]


def _yes(b) -> str:
    return "yes" if b else "no"


def _emit(rows, header, fmt, out):
    if fmt == "json":
        out.write(json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    else:
        widths = [max(len(str(h)), *(len(str(r[i])) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
        out.write("  ".join(str(h).ljust(wd) for h, wd in zip(header, widths)).rstrip() + "\n")
        for r in rows:
            out.write("  ".join(str(x).ljust(wd) for x, wd in zip(r, widths)).rstrip() + "\n")


def _root_factor(sp: SilverPolynomial):
    """Irreducible factor carrying the silver number, and the root on it."""
    approx = silver_number(sp, Fraction(1, 10**30))
    for f in factor(sp.poly):
        if count_real_roots(f, approx.lo, approx.hi) == 1:
            return f, AlgebraicReal(f, approx.lo, approx.hi, check=False)
    raise AssertionError("silver number not found among the factors")


# -- subcommands ----------------------------------------------------------------------------


def cmd_polys(args, cfg, out):
    rows = []
    for k, sp in enumerate(enumerate_silver_polynomials(args.N), 1):
        facs = factor(sp.poly)
        prim, d = silver_primitivity_by_gcd(sp)
        f, root = _root_factor(sp)
        pis = is_pisot(f, root)
        rows.append([
            k,
            "".join(map(str, sp.bits)),
            str(sp.poly),
            _yes(len(facs) == 1),
            " * ".join(f"({g})" for g in facs) if len(facs) > 1 else "",
            _yes(prim),
            d,
            pis.status,
            _yes(sp.is_distinguished),
        ])
    header = ["index", "bits", "polynomial", "irreducible", "factors", "primitive", "gcd", "pisot", "distinguished"]
    _emit(rows, header, cfg.output_format, out)


def cmd_root(args, cfg, out):
    sp = args.poly
    r = silver_number(sp, cfg.precision_width)
    data = {"poly": str(sp.poly), "root": r.to_json(), "decimal": r.decimal(cfg.digits), "truncation": TRUNCATION_NOTE}
    if sp.is_distinguished:
        n = sp.degree
        data["bound_check"] = {
            "lower": f"2-1/2^{n - 1}",
            "upper": f"2-1/2^{n}",
            "inside": Fraction(2) - Fraction(1, 2 ** (n - 1)) < r.lo and r.hi < Fraction(2) - Fraction(1, 2**n),
        }
        data["dresden"] = dresden_bounds(n, r)
    if cfg.output_format == "json":
        out.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        out.write(f"{data['poly']}: {data['decimal']} (interval [{r.lo}, {r.hi}])\n")
        for k in ("bound_check", "dresden"):
            if k in data:
                out.write(f"{k}: {json.dumps(data[k], sort_keys=True)}\n")


def cmd_normal_form(args, cfg, out):
    rep = SigmaIntRep.from_string(args.bits)
    nf = to_normal_form(rep, args.N)
    sp = SilverPolynomial.distinguished(args.N)
    same = value_of(rep, sp) == value_of(nf, sp)
    data = {
        "input": str(rep),
        "input_is_normal": is_normal_form(rep, args.N),
        "normal_form": str(nf),
        "degree_in": None if rep.is_empty else rep.degree,
        "degree_out": None if nf.is_empty else nf.degree,
        "value_coords": _coords(value_of(nf, sp)),
        "value_preserved": same,
    }
    if cfg.output_format == "json":
        out.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        out.write(f"{data['input']} -> {data['normal_form']} (value preserved: {_yes(same)})\n")


def cmd_integers(args, cfg, out):
    sp = SilverPolynomial.distinguished(args.N)
    root = silver_number(sp, Fraction(1, 10**30))
    count = args.count if args.count is not None else cfg.tile_counts
    ints, gaps = enumerate_with_gaps(args.N, count)
    rows = []
    for i, x in enumerate(ints):
        v = value_of(x, sp)
        gap = gaps[i - 1] if i > 0 else None
        rows.append([
            i,
            str(x),
            " ".join(_coords(v)),
            v.decimal(root, cfg.digits),
            " ".join(_coords(gap)) if gap is not None else "",
            gap.decimal(root, cfg.digits) if gap is not None else "",
        ])
    header = ["index", "bits", "value_coords", "decimal_trunc", "delta_coords", "delta_trunc"]
    fmt = cfg.output_format if cfg.output_format != "text" else "csv"
    _emit(rows, header, fmt, out)


def _rule_from_args(args) -> SubstitutionRule:
    if (args.poly is None) == (args.rule is None):
        raise UsageError("give exactly one of --poly or --rule")
    if args.poly is not None:
        return silver_rule(args.poly)
    return SubstitutionRule.parse(args.rule)


def cmd_tile(args, cfg, out):
    rule = _rule_from_args(args)
    rule.check()
    count = args.tiles if args.tiles is not None else cfg.tile_counts
    rep = detect_convergence(rule, args.start)
    prefix = limit_prefix(rule, args.start, count, rep)
    tiles, rho = prototile_lengths(rule)
    pts = endpoints(prefix, tiles, rho)
    fmt = cfg.output_format if cfg.output_format != "text" else "json"
    if fmt == "json":
        data = {
            "modulus": [str(c) for c in rho.defining.coeffs],
            "prototiles": [
                {"index": t.index, "length_coords": _coords(t.length), "length_decimal": t.length.decimal(rho, cfg.digits)}
                for t in tiles
            ],
            "prefix": list(prefix.entries),
            "endpoints": [e.decimal(rho, cfg.digits) for e in pts],
            "convergence": {"mode": rep.mode, "k": rep.k, "start": rep.start},
            "truncation": TRUNCATION_NOTE,
        }
        out.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        rows = [[i, prefix.entries[i - 1] if i > 0 else "", e.decimal(rho, cfg.digits)] for i, e in enumerate(pts)]
        _emit(rows, ["index", "tile", "endpoint_trunc"], "csv", out)


def cmd_converge(args, cfg, out):
    rule = _rule_from_args(args)
    rule.check()
    rep = detect_convergence(rule, args.start, args.budget)
    data = {"mode": rep.mode, "k": rep.k, "start": rep.start, "ins_k_of_start": list(rep.prefix.entries)}
    if cfg.output_format == "json":
        out.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        out.write(f"start R_{rep.start}: {rep}\n")


def cmd_matrix(args, cfg, out):
    a = companion(args.poly, CompanionForm(args.form))
    if args.action == "primitive":
        data = {"matrix": a.tolist(), "irreducible": is_irreducible_matrix(a), "primitive": is_primitive(a)}
    elif args.action == "perron":
        pd = perron(a, cfg.precision_width)
        data = {
            "matrix": a.tolist(),
            "rho": pd.rho.to_json(),
            "rho_decimal": pd.rho.decimal(cfg.digits),
            "right_vector": [_coords(x) for x in pd.right_vector],
            "right_decimal": pd.right_decimals(cfg.digits),
            "left_vector": [_coords(x) for x in pd.left_vector],
            "left_decimal": pd.left_decimals(cfg.digits),
            "truncation": TRUNCATION_NOTE,
        }
    else:
        other = args.poly2 or args.poly
        b = companion(other, CompanionForm(args.form2))
        m = intertwiner(a, b)
        data = {"A": a.tolist(), "B": b.tolist(), "M": m.tolist(), "BM_equals_MA": (b @ m) == (m @ a), "det_M": m.det()}
    if cfg.output_format == "json":
        out.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        for k in sorted(data):
            out.write(f"{k}: {json.dumps(data[k])}\n")


def cmd_dichotomy(args, cfg, out):
    sp = args.poly
    d = cfg.degree_bounds.get("dichotomy", 10)
    root = silver_number(sp, Fraction(1, 10**30))

    def progress(done, total):
        if args.progress:
            sys.stderr.write(f"\rverified {done}/{total}")
            if done == total:
                sys.stderr.write("\n")

    mu = dich.estimate_mu(sp.poly, root, d)
    cert = dich.build_certificate(sp.poly, root, mu.lower)
    res = dich.verify_certificate(cert, d, root, progress=progress)
    if not res.ok:
        raise SilverlineError(f"certificate failed at q={res.witness}")
    cert = replace(cert, verified_degree=d)
    if args.progress:
        sys.stderr.write(
            f"{sp.poly}: v0={list(cert.v0)} verified for all q of degree <= {d} "
            f"({res.checked} nonzero, {res.skipped_zero} zero); scan minimum {float(mu):.12f} (range-limited)\n"
        )
    # the certificate is a data artifact: JSON unless CSV was requested
    if cfg.output_format == "csv":
        data = json.loads(cert.to_json())
        _emit([[k, " ".join(v) if isinstance(v, list) else v] for k, v in sorted(data.items())], ["field", "value"], "csv", out)
    else:
        out.write(json.dumps(json.loads(cert.to_json()), indent=2, sort_keys=True) + "\n")


def cmd_verify_all(args, cfg, out):
    """Small reproducible suite touching every module; one line per check."""
    from . import checks

    results = checks.run_all(quick=not args.full)
    ok = True
    for name, passed, detail in results:
        ok &= passed
        out.write(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}\n")
    if not ok:
        raise SilverlineError("verify-all: at least one check failed")


# -- parser -----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value configuration file (flags win)")
    common.add_argument("--digits", type=int, help="decimal digits (truncated)")
    common.add_argument("--width", type=_fraction, help="interval width for certified roots, e.g. 1/100000 or 1e-20")
    common.add_argument("--emit", choices=FORMATS, help="output format")

    p = argparse.ArgumentParser(prog="silverline", description="Silver numbers, their integers and tilings.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("polys", parents=[common], help="list silver polynomials of degree N")
    s.add_argument("N", type=_degree)
    s.set_defaults(func=cmd_polys)

    s = sub.add_parser("root", parents=[common], help="certified silver number")
    s.add_argument("--poly", type=_bits, required=True, help="bits b_1..b_N, e.g. 111")
    s.set_defaults(func=cmd_root)

    s = sub.add_parser("normal-form", parents=[common], help="normal form of a bit string")
    s.add_argument("N", type=_degree)
    s.add_argument("bits")
    s.set_defaults(func=cmd_normal_form)

    s = sub.add_parser("integers", parents=[common], help="ordered rho_N-integers with successor gaps")
    s.add_argument("N", type=_degree)
    s.add_argument("--count", type=_positive)
    s.set_defaults(func=cmd_integers)

    for name, func in (("tile", cmd_tile), ("converge", cmd_converge)):
        s = sub.add_parser(name, parents=[common], help=f"{name} for a substitution rule")
        s.add_argument("--poly", type=_bits)
        s.add_argument("--rule", help="comma-separated strings, e.g. 13,1,2")
        s.add_argument("--start", type=_positive, default=1)
        if name == "tile":
            s.add_argument("--tiles", type=_positive)
        else:
            s.add_argument("--budget", type=_positive)
        s.set_defaults(func=func)

    s = sub.add_parser("matrix", parents=[common], help="companion-matrix operations")
    s.add_argument("action", choices=("primitive", "perron", "intertwine"))
    s.add_argument("--poly", type=_bits, required=True)
    s.add_argument("--form", choices=[f.value for f in CompanionForm], default="dw")
    s.add_argument("--poly2", type=_bits, help="second polynomial for intertwine (default: same)")
    s.add_argument("--form2", choices=[f.value for f in CompanionForm], default="dwt")
    s.set_defaults(func=cmd_matrix)

    s = sub.add_parser("dichotomy", parents=[common], help="build and verify a tiling certificate")
    s.add_argument("--poly", type=_bits, required=True)
    s.add_argument("--degree-bound", type=_positive)
    s.add_argument("--progress", action="store_true", help="report verification progress on stderr")
    s.set_defaults(func=cmd_dichotomy)

    s = sub.add_parser("verify-all", parents=[common], help="run the built-in consistency checks")
    s.add_argument("--full", action="store_true", help="use the larger acceptance-scale parameters")
    s.set_defaults(func=cmd_verify_all)
    return p


def _config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if getattr(args, "config", None) else RunConfig()
    return cfg.override(
        digits=args.digits,
        precision_width=args.width,
        output_format=args.emit,
        **{"degree_bound.dichotomy": getattr(args, "degree_bound", None)},
    )


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"silverline: error: {exc}\n")
        return 2
    try:
        args.func(args, cfg, out)
    except UsageError as exc:
        sys.stderr.write(f"silverline: error: {exc}\n")
        return 2
    except SilverlineError as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        for attr in ("budget", "row", "tile", "expected", "found"):
            if getattr(exc, attr, None) is not None:
                err[attr] = getattr(exc, attr)
        sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
        return 1
    return 0


def schema_text() -> str:
    return resources.files("silverline").joinpath("schemas/tile.schema.json").read_text()


if __name__ == "__main__":
    raise SystemExit(main())
