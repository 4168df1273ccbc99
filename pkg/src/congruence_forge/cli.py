"""Command-line interface.

Exit codes: 0 for a clean verdict, 2 when the verdict is negative (a
congruence fails, a progression is not explainable, a bound is violated),
1 for errors.  Reports go to standard output as JSON unless ``--csv`` is given.
"""

import argparse
import configparser
import csv
import io
import json
import os
import sys
from fractions import Fraction

from .arith import fraction_str
from .congruence import (
    DEFAULT_MIN_TERMS, CongruenceQuery, check_explainable, check_maximality_bounds,
    reports_to_csv, scan_maximal_progressions, verify_square_class_theorem,
)
from .dsl import format_spec, parse_spec
from .errors import CongruenceForgeError, ConsistencyError
from .jacobi import expand, specialize
from .oracle import STATISTICS, oracle_product_coefficients, oracle_specialization, rank_table

THREADS_ENV = "CONGRUENCE_FORGE_THREADS"
DEFAULTS = {"terms": 500, "threads": 1, "min_terms": DEFAULT_MIN_TERMS}


def load_config(path):
    """Read ``key = value`` lines (``#`` comments allowed) into a dict of ints."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    with open(path, encoding="utf-8") as fh:
        parser.read_string("[defaults]\n" + fh.read())
    out = {}
    for key, raw in parser["defaults"].items():
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise ValueError(f"unknown config key {key!r}")
        out[key] = int(raw.strip().strip('"'))
    return out


def resolve_settings(args, environ=None):
    """Defaults, then config file, then environment, then flags."""
    environ = os.environ if environ is None else environ
    settings = dict(DEFAULTS)
    if getattr(args, "config", None):
        settings.update(load_config(args.config))
    if environ.get(THREADS_ENV):
        settings["threads"] = int(environ[THREADS_ENV])
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            settings[key] = val
    if settings["terms"] < 1 or settings["threads"] < 1:
        raise ValueError("terms and threads must be positive")
    return settings


def _dump(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _beta(args, spec):
    beta = Fraction(args.beta)
    if args.beta_combinatorial:
        beta += spec.q_shift
    return beta


def cmd_expand(args, cfg, out):
    spec = parse_spec(args.spec)
    exp = expand(spec, cfg["terms"])
    spec_vals = specialize(exp)
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "zeta_exponent", "coefficient"])
        for n, c in exp.items():
            for e, v in c.as_fractions().items():
                w.writerow([fraction_str(n), fraction_str(e), v])
        out.write(buf.getvalue())
        return 0
    out.write(_dump({
        "spec": format_spec(spec),
        "pole_order": exp.pole_order,
        "q_shift": fraction_str(exp.support_offset),
        "denom_q": exp.series.denom_q,
        "denom_z": exp.denom_z,
        "truncation": fraction_str(exp.truncation),
        "weight": None if spec.weight is None else fraction_str(spec.weight),
        "index": None if spec.index is None else fraction_str(spec.index),
        "series": exp.series.to_json(),
        "specialization": spec_vals.to_json()["coeffs"],
    }))
    return 0


def cmd_scan(args, cfg, out):
    spec = parse_spec(args.spec)
    exp = expand(spec, cfg["terms"])
    res = scan_maximal_progressions(None, args.ell, args.mmax, phi=exp,
                                    min_terms=cfg["min_terms"], threads=cfg["threads"])
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "M", "beta", "bounds_ok"])
        for m, b in res.maximal:
            w.writerow(["maximal", m, fraction_str(b), ""])
        for m, b in res.certified:
            w.writerow(["certified", m, fraction_str(b), res.bounds[(m, b)].ok])
        out.write(buf.getvalue())
    else:
        payload = res.to_json()
        payload["spec"] = format_spec(spec)
        out.write(_dump(payload))
    return 0


def _query(args, cfg, spec):
    return CongruenceQuery(args.ell, args.M, _beta(args, spec))


def cmd_explain(args, cfg, out):
    spec = parse_spec(args.spec)
    exp = expand(spec, cfg["terms"])
    report = check_explainable(exp, _query(args, cfg, spec), cfg["min_terms"])
    out.write(reports_to_csv([report]) if args.csv else _dump(report.to_json()))
    return 0 if report.explainable else 2


def cmd_orbit(args, cfg, out):
    spec = parse_spec(args.spec)
    exp = expand(spec, cfg["terms"])
    q = _query(args, cfg, spec)
    base = check_explainable(exp, q, cfg["min_terms"])
    if not base.explainable:
        out.write(reports_to_csv([base]) if args.csv else _dump(base.to_json()))
        return 2
    res = verify_square_class_theorem(exp, q, args.literal_coprimality, cfg["min_terms"], base)
    out.write(reports_to_csv([res.base]) if args.csv else _dump(res.to_json()))
    return 2 if res.violations else 0


def cmd_bounds(args, cfg, out):
    res = check_maximality_bounds(args.M, Fraction(args.beta))
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "ord_M", "ord_beta", "bound", "ok"])
        for d in res.primes:
            w.writerow([d.p, d.ord_M, "inf" if d.ord_beta is None else d.ord_beta,
                        "" if d.bound is None else d.bound, d.ok])
        out.write(buf.getvalue())
    else:
        out.write(_dump(res.to_json()))
    return 0 if res.ok else 2


def cmd_oracle(args, cfg, out):
    if args.target in STATISTICS:
        if args.ell is None or not args.n:
            raise ValueError("statistic tables need --ell and at least one --n")
        tables = [rank_table(n, args.ell, args.target, args.colors) for n in args.n]
        payload = [dict(t.to_json(), equidistributed=t.equidistributed) for t in tables]
        out.write(_dump(payload))
        return 0
    spec = parse_spec(args.target)
    terms = cfg["terms"]
    engine = expand(spec, terms)
    naive = oracle_product_coefficients(spec, terms)
    mismatches = [fraction_str(n) for n, c in engine.items() if naive.coefficient(n) != c]
    mismatches += [fraction_str(n) for n, c in naive.items()
                   if engine.series.coefficient(n) != c and fraction_str(n) not in mismatches]
    direct = oracle_specialization(spec, terms)
    special = specialize(engine)
    spec_bad = [fraction_str(n) for n in special.exponents() if direct[n] != special.coeffs[n]]
    out.write(_dump({
        "spec": format_spec(spec),
        "terms": terms,
        "series_agree": not mismatches,
        "specialization_agree": not spec_bad,
        "series_mismatches": mismatches,
        "specialization_mismatches": spec_bad,
    }))
    if mismatches or spec_bad:
        raise ConsistencyError("engine and oracle disagree")
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file with terms, threads, min_terms")
    common.add_argument("--terms", type=int, help="number of q-coefficients to expand")
    common.add_argument("--threads", type=int, help="worker threads for scans")
    common.add_argument("--min-terms", dest="min_terms", type=int,
                        help="fewest checked exponents accepted as evidence")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--csv", action="store_true", help="CSV output")

    p = argparse.ArgumentParser(prog="congruence-forge",
                                description="Jacobi-form expansions and explainable congruences.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("expand", parents=[common], help="expand a product spec")
    e.add_argument("spec")
    e.set_defaults(func=cmd_expand)

    s = sub.add_parser("scan", parents=[common], help="maximal congruence progressions")
    s.add_argument("spec")
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--mmax", type=int, required=True)
    s.set_defaults(func=cmd_scan)

    for name, func, helptext in (("explain", cmd_explain, "decide explainability"),
                                 ("orbit", cmd_orbit, "check every square-class orbit member")):
        c = sub.add_parser(name, parents=[common], help=helptext)
        c.add_argument("spec")
        c.add_argument("--ell", type=int, required=True)
        c.add_argument("--M", type=int, required=True)
        c.add_argument("--beta", required=True, help="exponent class as num/den")
        c.add_argument("--beta-combinatorial", action="store_true",
                       help="treat --beta as a combinatorial index and add the q-shift")
        if name == "orbit":
            c.add_argument("--literal-coprimality", action="store_true",
                           help="u coprime to M only (orbit may leave the support)")
        c.set_defaults(func=func)

    b = sub.add_parser("bounds", parents=[common], help="maximality bounds for (M, beta)")
    b.add_argument("--M", type=int, required=True)
    b.add_argument("--beta", required=True)
    b.set_defaults(func=cmd_bounds)

    o = sub.add_parser("oracle", parents=[common],
                       help="cross-check a spec, or tabulate a partition statistic")
    o.add_argument("target", help=f"product spec or one of: {', '.join(STATISTICS)}")
    o.add_argument("--ell", type=int)
    o.add_argument("--n", type=int, nargs="+")
    o.add_argument("--colors", type=int, default=2)
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_settings(args)
        return args.func(args, cfg, out)
    except (CongruenceForgeError, ValueError, OSError, ZeroDivisionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
