from __future__ import annotations
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

import pandas as pd

from .arith import factorize
from .certify import (
    analyze,
    certificate_from_json,
    report_to_json,
    verify_certificate,
)
from .config import ALL_CRITERIA, DEFAULT_BUDGET_MS, ScanConfig, seed_from_env, update_params
from .errors import BudgetExceeded, OracleBudgetExceeded, PolycertError
from .newton import delta_candidates, newton_polygon, valuation_points
from .oracle import oracle_factor
from .parsing import format_poly, parse_coeffs, parse_poly
from .poly import Polynomial
from .render import render_svg

log = logging.getLogger("polycert")

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _setup_logging(verbose: bool):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)s: %(message)s",
    )


def _criteria(text: str) -> frozenset:
    tags = frozenset(t.strip().lower() for t in text.split(",") if t.strip())
    unknown = tags - ALL_CRITERIA
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown criteria: {', '.join(sorted(unknown))}")
    return tags


def _polynomial(args) -> Polynomial:
    if args.coeffs is not None:
        return parse_coeffs(args.coeffs)
    return parse_poly(args.poly)


def _add_poly_args(p: argparse.ArgumentParser):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--poly", help='Polynomial text, e.g. "64+56z^2+14z^4+z^6"')
    src.add_argument("--coeffs", help="Comma-separated coefficients a_0,...,a_n")


# --- subcommands -------------------------------------------------------------

def cmd_analyze(args) -> int:
    f = _polynomial(args)
    scan = ScanConfig(
        m_min=args.m_min,
        m_max=args.m_max,
        factor_budget_ms=args.budget_ms,
        criteria=args.criteria,
    )
    report = analyze(f, scan)
    if args.json:
        print(report_to_json(report))
        return EXIT_OK

    print(f"polynomial : {format_poly(report.polynomial)}")
    print(f"content    : {report.content}")
    d = report.delta
    witness = "" if d.is_trivial else f" (p={d.prime}, j={d.j}, d1={d.d1}" + (
        f", d2={d.d2})" if d.d2 is not None else ")")
    print(f"delta      : {d.bound}{witness}")
    if report.m_range is not None:
        lo, hi = report.m_range
        print(f"tried m    : {lo}..{hi} ({report.tried_count} witnesses, "
              f"{report.inconclusive_count} inconclusive)")
    print(f"verdict    : {report.verdict_text}")
    table = report.to_frame()
    if not table.empty:
        print()
        print(table.to_string(index=False))
    return EXIT_OK


def newton_summary(f: Polynomial, prime: int) -> dict:
    """Vertices, edges and Δ candidates of f at ``prime`` as plain data."""
    poly = newton_polygon(f, prime)
    edges = [{
        "start": [e.start.x, e.start.y],
        "end": [e.end.x, e.end.y],
        "width": e.width,
        "slope": str(e.slope),
        "lattice_count": e.lattice_count,
        "interior": [[lp.x, lp.y] for lp in e.lattice_points()[1:-1]],
    } for e in poly.edges]
    candidates = [{
        "j": c.j, "bound": c.bound, "d1": c.d1, "d2": c.d2,
    } for c in delta_candidates(f, prime)]
    best = max((c["bound"] for c in candidates), default=1)
    return {
        "prime": prime,
        "vertices": [[v.x, v.y] for v in poly.vertices],
        "edges": edges,
        "delta_candidates": candidates,
        "delta": best,
    }


def cmd_newton(args) -> int:
    f = _polynomial(args)
    summary = newton_summary(f, args.prime)
    if args.svg:
        svg = render_svg(newton_polygon(f, args.prime), valuation_points(f, args.prime))
        Path(args.svg).write_text(svg, encoding="utf-8")
        log.info("Wrote %s", args.svg)
    if args.json:
        print(json.dumps(summary, indent=2))
        return EXIT_OK

    print(f"Newton polygon of {format_poly(f)} at p = {args.prime}")
    print("vertices: " + ", ".join(f"({x},{y})" for x, y in summary["vertices"]))
    edges = pd.DataFrame(summary["edges"])
    if not edges.empty:
        edges["start"] = edges["start"].map(tuple)
        edges["end"] = edges["end"].map(tuple)
        edges["interior"] = edges["interior"].map(lambda pts: " ".join(f"({x},{y})" for x, y in pts))
        print(edges.to_string(index=False))
    cands = pd.DataFrame(summary["delta_candidates"], columns=["j", "bound", "d1", "d2"])
    if cands.empty:
        print("no j satisfies the two-edge hypothesis; delta = 1")
    else:
        print("delta candidates:")
        print(cands.to_string(index=False))
        print(f"delta = {summary['delta']}")
    return EXIT_OK


def cmd_verify(args) -> int:
    f = _polynomial(args)
    text = sys.stdin.read() if args.cert == "-" else Path(args.cert).read_text(encoding="utf-8")
    cert = certificate_from_json(text)
    result = verify_certificate(f, cert)
    if result.passed:
        print(f"PASS {cert.theorem} bound {cert.bound}")
        return EXIT_OK
    print(f"FAIL {result.failure}")
    if result.failure == "q_unverifiable":
        return EXIT_BUDGET
    return EXIT_VERIFY_FAILED


def cmd_oracle(args) -> int:
    f = _polynomial(args)
    fac = oracle_factor(f)
    if args.json:
        print(json.dumps({
            "unit": fac.unit,
            "content": str(fac.content),
            "factors": [[str(a) for a in g.coeffs] for g in fac.factors],
            "count": fac.count,
        }, indent=2))
        return EXIT_OK
    scalar = fac.unit * fac.content
    head = "" if scalar == 1 else f"{scalar} * "
    print(head + " * ".join(f"({format_poly(g)})" for g in fac.factors))
    print(f"irreducible factors: {fac.count}")
    if fac.content > 1:
        content = factorize(fac.content)
        print("content: " + " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in content.factors))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="polycert",
        description="Certify bounds on the number of irreducible factors of integer polynomials",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    ap.add_argument("--verbose", action="store_true", help="Turn on DEBUG logging")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="Search witnesses and report the best certificate")
    _add_poly_args(a)
    a.add_argument("--m-min", type=int, help="Smallest witness m (raised to ceil(h_f)+2)")
    a.add_argument("--m-max", type=int, help="Largest witness m (default ceil(h_f)+1000)")
    a.add_argument("--budget-ms", type=int, default=DEFAULT_BUDGET_MS,
                   help="Factoring budget per integer, in milliseconds")
    a.add_argument("--criteria", type=_criteria, default=ALL_CRITERIA,
                   help="Comma-separated subset of t1,t2,t3,t4,l3,l4,l5")
    a.add_argument("--n-jobs", type=int, help="Parallel workers for the witness scan")
    a.add_argument("--json", action="store_true", help="Emit the report as JSON")
    a.set_defaults(func=cmd_analyze)

    n = sub.add_parser("newton", help="Newton polygon and Δ candidates at one prime")
    _add_poly_args(n)
    n.add_argument("--prime", type=int, required=True)
    n.add_argument("--svg", help="Write an SVG drawing of the polygon to this path")
    n.add_argument("--json", action="store_true")
    n.set_defaults(func=cmd_newton)

    v = sub.add_parser("verify", help="Re-check a certificate against a polynomial")
    _add_poly_args(v)
    v.add_argument("--cert", required=True, help="Certificate JSON file, or - for stdin")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="Brute-force factorization (degree <= 8)")
    _add_poly_args(o)
    o.add_argument("--json", action="store_true")
    o.set_defaults(func=cmd_oracle)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _setup_logging(args.verbose)

    update_params(seed=seed_from_env(), n_jobs=getattr(args, "n_jobs", None))

    try:
        return args.func(args)
    except (BudgetExceeded, OracleBudgetExceeded) as exc:
        log.error("Budget exhausted: %s", exc)
        return EXIT_BUDGET
    except (PolycertError, OSError, json.JSONDecodeError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
