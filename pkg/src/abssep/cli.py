"""Command-line interface.

Subcommands: compute, search, family, aux, perturb, verify.  All
numeric output is decimal strings (never binary floats) so serialized
artifacts are bit-exact across platforms.  Exit codes: 0 success,
1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import mpmath as mp

from . import auxpoly, families, perturb
from .auxpoly import AuxError, KINDS_BY_TAG
from .families import FamilyError
from .perturb import PerturbError, QuadVal
from .polycore import IntPolynomial, ParseError, parse_poly, render_poly
from .rootfind import RootFindError
from .search import (SearchError, SearchSpec, records_to_csv,
                     records_to_markdown, run_search, save_records)
from .sepmeasure import MEASURES, MeasureError, measure

FORMATS = ("json", "csv", "md")

_DOMAIN_ERRORS = (MeasureError, FamilyError, AuxError, PerturbError,
                  SearchError, ParseError, RootFindError, ValueError)


# ---------------------------------------------------------------------
# rendering helpers
# ---------------------------------------------------------------------

def _sci4(value) -> str:
    """4-significant-digit scientific notation of a decimal string or
    mpf value."""
    return mp.nstr(mp.mpf(str(value)), 4, min_fixed=1, max_fixed=0)


def _q2(quality) -> str:
    return "" if quality is None else f"{float(quality):.2f}"


def _rat_str(x) -> str:
    """Exact rendering: Fractions as p/q, quadratic-field values as
    a+b*sqrt(m)."""
    if isinstance(x, QuadVal):
        if x.b == 0:
            return _rat_str(Fraction(x.a))
        return (f"{_rat_str(Fraction(x.a))} + "
                f"{_rat_str(Fraction(x.b))}*sqrt({x.m})")
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else \
        f"{f.numerator}/{f.denominator}"


def _rows_out(rows, headers, fmt, out):
    """Generic row emitter for the three output formats."""
    if fmt == "json":
        print(json.dumps([dict(zip(headers, r)) for r in rows],
                         indent=2), file=out)
    elif fmt == "csv":
        import csv
        w = csv.writer(out, lineterminator="\n")
        w.writerow(headers)
        w.writerows(rows)
    else:
        print("| " + " | ".join(headers) + " |", file=out)
        print("|" + "---|" * len(headers), file=out)
        for r in rows:
            print("| " + " | ".join(str(c) for c in r) + " |", file=out)


# ---------------------------------------------------------------------
# table emitters (standard record-table layouts)
# ---------------------------------------------------------------------

_LAYOUTS = {
    "table1": ("degree", "max_height", "measure", "polynomial", "value"),
    "table2": ("polynomial", "abssep", "quality"),
    "table3": ("n", "height", "abssep", "quality"),
    "table4": ("degree", "height", "abssep", "quality"),
    "table5": ("height", "abssep", "quality"),
}


def emit_table(results, layout: str, fmt: str = "md") -> str:
    """Render result dicts in one of the standard record-table layouts.

    Values print with 4 significant digits in scientific notation,
    qualities with 2 decimals.  Raises ValueError on schema mismatch.
    """
    if layout not in _LAYOUTS:
        raise ValueError(f"unknown layout {layout!r}")
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    headers = _LAYOUTS[layout]
    rows = []
    results = list(results)
    if layout == "table4":
        results.sort(key=lambda r: (r.get("degree", 0), r.get("height", 0)))
    for r in results:
        missing = [h for h in headers if h not in r]
        if missing:
            raise ValueError(f"result missing fields {missing} "
                             f"for layout {layout}")
        row = []
        for h in headers:
            v = r[h]
            if h in ("value", "abssep"):
                row.append(_sci4(v))
            elif h == "quality":
                row.append(_q2(v))
            else:
                row.append(v)
        rows.append(row)
    import io
    buf = io.StringIO()
    _rows_out(rows, list(headers), fmt, buf)
    return buf.getvalue()


# ---------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------

def _cmd_compute(args, out):
    p = parse_poly(args.poly)
    res = measure(p, args.measure, prec_ceiling=args.precision_ceiling,
                  use_squarefree_part=args.squarefree_part)
    rows = [[render_poly(p), args.measure, mp.nstr(res.value, 20),
             _q2(res.quality), f"{res.witness[0]},{res.witness[1]}",
             res.precision_bits]]
    _rows_out(rows, ["polynomial", "measure", "value", "quality",
                     "witness", "precision_bits"], args.format, out)
    return 0


def _cmd_search(args, out):
    measures = tuple(args.measures.split(",")) if args.measures \
        else SearchSpec.__dataclass_fields__["measures"].default
    spec = SearchSpec(degree=args.degree, max_height=args.max_height,
                      measures=measures, mode=args.mode, seed=args.seed,
                      count=args.count, top_k=args.top_k,
                      min_quality=args.min_quality)
    summary = run_search(spec, jobs=args.jobs,
                         checkpoint_path=args.resume,
                         prec_ceiling=args.precision_ceiling)
    records = summary.all_records()
    if args.out:
        save_records(records, args.out)
        print(f"wrote {len(records)} records to {args.out}",
              file=sys.stderr)
    if args.format == "csv":
        out.write(records_to_csv(records))
    elif args.format == "md":
        out.write(records_to_markdown(records))
    else:
        payload = []
        for r in records:
            d = {"measure": r.measure, "coeffs": list(r.coeffs),
                 "polynomial": render_poly(r.polynomial),
                 "value": r.value, "quality": r.quality,
                 "witness": list(r.witness), "degree": r.degree,
                 "max_height": r.max_height}
            payload.append(d)
        print(json.dumps(payload, indent=2), file=out)
    print(f"scanned {summary.scanned} polynomials in "
          f"{summary.elapsed:.1f}s", file=sys.stderr)
    return 0


def _cmd_family(args, out):
    if args.measure != "abssep":
        raise FamilyError("family tables are defined for abssep only")
    params = [int(p) for p in args.param]
    rows_data = families.family_quality_table(
        args.name, params, by_height=args.by_height,
        prec_ceiling=args.precision_ceiling)
    rows = [[r.param, r.height, _sci4(r.abssep), _q2(r.quality)]
            for r in rows_data]
    _rows_out(rows, ["param", "height", "abssep", "quality"],
              args.format, out)
    return 0


def _cmd_aux(args, out):
    p = parse_poly(args.poly)
    rows = []
    if args.kind:
        aux = auxpoly.build_aux(p, KINDS_BY_TAG[args.kind],
                                prec_ceiling=args.precision_ceiling)
        rows.append(["aux_poly", args.kind,
                     ",".join(str(c) for c in aux.poly.coeffs)])
        rows.append(["aux_height", args.kind, str(aux.height)])
    tau = auxpoly.certified_gap_threshold(
        p, args.measure, args.pair_class,
        prec_ceiling=args.precision_ceiling)
    rows.append(["tau_exact", args.pair_class, _rat_str(tau)])
    rows.append(["tau_decimal", args.pair_class,
                 mp.nstr(mp.mpf(tau.numerator) / tau.denominator, 8,
                         min_fixed=1, max_fixed=0)])
    rows.append(["exponent_bound", args.pair_class,
                 str(auxpoly.exponent_of(args.measure, args.pair_class,
                                         p.degree))])
    _rows_out(rows, ["quantity", "context", "value"], args.format, out)
    return 0


# (R, Q, base-root pairs) for the curated perturbation setups
def _perturb_setups():
    w6 = perturb.OMEGA_6
    w6a = perturb.OMEGA_6_ALT
    one = Fraction(1)
    i_ = perturb.OMEGA_I
    r5a = QuadVal(Fraction(9, 2), Fraction(1, 2), -63)
    r5b = QuadVal(Fraction(11, 2), Fraction(1, 2), -23)
    return {
        "deg4": (perturb.R4, perturb.Q4, [(one, i_)]),
        "deg6": (perturb.R6, perturb.Q6, [(one, w6), (one, w6a)]),
        "deg5": (families.R5, families.q5_poly(0, "B"), [(r5a, r5b)]),
        "extra_deg4": (families.EXTRA_DEG4[0], families.EXTRA_DEG4[1],
                       [(one, w6)]),
        "extra_deg3_1": (families.EXTRA_DEG3[1][0],
                         families.EXTRA_DEG3[1][1], [(one, i_)]),
        "extra_deg3_2": (families.EXTRA_DEG3[2][0],
                         families.EXTRA_DEG3[2][1], [(one, w6a)]),
        "extra_deg5_1": (families.EXTRA_DEG5[1][0],
                         families.EXTRA_DEG5[1][1], [(w6, w6a)]),
        "extra_deg5_2": (families.EXTRA_DEG5[2][0],
                         families.EXTRA_DEG5[2][1], [(one, w6a)]),
    }


def _cmd_perturb(args, out):
    setups = _perturb_setups()
    R, Q, pairs = setups[args.setup]
    depth = args.order if args.order is not None else R.degree + 2
    depth = min(depth, R.degree + 2)
    rows = []
    roots_seen = []
    for pair in pairs:
        for w in pair:
            if w not in roots_seen:
                roots_seen.append(w)
    for w in roots_seen:
        x = perturb.invert_series(R, Q, w, depth)
        coeffs = "; ".join(_rat_str(c) for c in x.coeffs)
        rows.append(["series", _rat_str(w), coeffs])
    for pair in pairs:
        k = perturb.cancellation_order(R, Q, pair, depth)
        verdict = (f"cancels through order {depth}" if k is None
                   else f"first mismatch at order {k}")
        rows.append(["cancellation",
                     f"({_rat_str(pair[0])}, {_rat_str(pair[1])})",
                     verdict])
    if args.setup == "deg6":
        rows.append(["alt_pair_check", "deg6",
                     str(perturb.check_other_roots_deg6())])
    _rows_out(rows, ["kind", "context", "value"], args.format, out)
    return 0


def _cmd_verify(args, out):
    from . import verifysuite
    ok = verifysuite.run_all(jobs=args.jobs, out=out,
                             quick=args.quick)
    return 0 if ok else 1


# ---------------------------------------------------------------------
# argument grammar
# ---------------------------------------------------------------------

def _build_parser():
    ap = argparse.ArgumentParser(
        prog="abssep",
        description="certified root-separation measures of integer "
                    "polynomials")
    ap.add_argument("--precision-ceiling", type=int,
                    default=_env_ceiling(),
                    help="root-finding precision ceiling in bits "
                         "(default 4096, env ABSSEP_PRECISION_CEILING)")
    ap.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                    help="worker count for parallel stages")
    ap.add_argument("--format", choices=FORMATS, default="json")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="one certified measure of one "
                                       "polynomial")
    c.add_argument("--poly", required=True,
                   help='e.g. "10X^3-3X^2-2X+3" or ascending '
                        'coefficients "3,-2,-3,10"')
    c.add_argument("--measure", required=True, choices=MEASURES)
    c.add_argument("--squarefree-part", action="store_true",
                   help="measure the squarefree part of a non-"
                        "squarefree input instead of failing")
    c.set_defaults(fn=_cmd_compute)

    s = sub.add_parser("search", help="record search over a degree/"
                                      "height box")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--max-height", type=int, required=True)
    s.add_argument("--measures", default=None,
                   help="comma list (default: all four)")
    s.add_argument("--mode", choices=("exhaustive", "random"),
                   default="exhaustive")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=0,
                   help="sample size in random mode")
    s.add_argument("--top-k", type=int, default=3)
    s.add_argument("--min-quality", type=float, default=None)
    s.add_argument("--out", default=None,
                   help="write records as JSON lines to this path")
    s.add_argument("--resume", default=None,
                   help="checkpoint path (created/reused)")
    s.set_defaults(fn=_cmd_search)

    f = sub.add_parser("family", help="certified table rows for a "
                                      "curated family")
    f.add_argument("--name", required=True,
                   choices=families.FAMILY_NAMES)
    f.add_argument("--param", required=True, nargs="+",
                   help="one or more parameter values (n or M)")
    f.add_argument("--measure", default="abssep")
    f.add_argument("--by-height", action="store_true",
                   help="interpret parameters as target heights")
    f.set_defaults(fn=_cmd_family)

    a = sub.add_parser("aux", help="auxiliary polynomials and "
                                   "certified gap thresholds")
    a.add_argument("--poly", required=True)
    a.add_argument("--measure", required=True,
                   choices=[m for m in MEASURES])
    a.add_argument("--pair-class", required=True,
                   choices=(auxpoly.REAL_REAL, auxpoly.REAL_COMPLEX,
                            auxpoly.COMPLEX_COMPLEX))
    a.add_argument("--kind", default=None,
                   choices=sorted(KINDS_BY_TAG),
                   help="also print this auxiliary polynomial")
    a.set_defaults(fn=_cmd_aux)

    p = sub.add_parser("perturb", help="exact perturbation series and "
                                       "cancellation verdicts")
    p.add_argument("--setup", required=True,
                   choices=sorted(_perturb_setups()))
    p.add_argument("--order", type=int, default=None,
                   help="truncation order (capped at degree+2)")
    p.set_defaults(fn=_cmd_perturb)

    v = sub.add_parser("verify", help="run the property-based "
                                      "verification suites")
    v.add_argument("--quick", action="store_true",
                   help="reduced sample sizes")
    v.set_defaults(fn=_cmd_verify)
    return ap


def _env_ceiling():
    raw = os.environ.get("ABSSEP_PRECISION_CEILING")
    return int(raw) if raw else None


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.fn(args, sys.stdout)
    except _DOMAIN_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
