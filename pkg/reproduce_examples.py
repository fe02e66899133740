"""
Run the worked-example corpus through ``analyze`` and the brute-force oracle and
print one summary row per polynomial.

Usage:
  - Run: `python reproduce_examples.py`
  - Set `POLYCERT_SEED` to fix Pollard-rho randomness, `POLYCERT_VERBOSE=1`
    for DEBUG logs.

Every row also re-verifies the best certificate and flags any bound that is
smaller than the oracle's factor count.
"""

from __future__ import annotations
import logging
import os
import sys

import pandas as pd

CORPUS = [
    # (name, polynomial, m_max)
    ("three quadratics", "64+56z^2+14z^4+z^6", 200),
    ("leading-term quartic", "81+1782z^2+9797z^4", 20),
    ("p^k d quartic", "-2-4z+3z^2-2z^3+2z^4", 20),
    ("square of a cubic", "9-36z+54z^2-2094z^3+4125z^4-2058z^5+117649z^6", 10),
    ("F1", "1287+3168z^2-3528z^3+1936z^4-4312z^5+2401z^6", 10),
    ("F2", "4+120z^2+899z^4", 10),
    ("F3", "4-16z+32z^2+4z^3-56z^4+72z^5+81z^6", 10),
    ("F4", "2-2z+2z^2-375z^3+100z^4-100z^5+100z^6-18750z^7", 10),
    ("reversed sextic", "-3+3z+343z^2-126z^4+126z^5+14406z^6", 10),
    ("dominant constant", "20449-3146z+121z^2+13442z^3-1034z^4+2209z^6", 10),
    ("unit-circle zeros", "128+120z^2-113z^4-105z^6", 10),
    ("cyclotomic", "1+z+z^2", 10),
]


def main() -> None:
    # Make `src` importable without requiring installation
    here = os.path.dirname(os.path.abspath(__file__))
    src_path = os.path.join(here, "src")
    if src_path not in sys.path:
        sys.path.insert(0, src_path)

    from polycert.certify import analyze, verify_certificate
    from polycert.config import ScanConfig, seed_from_env, update_params
    from polycert.oracle import oracle_count
    from polycert.parsing import parse_poly

    verbose = os.getenv("POLYCERT_VERBOSE", "0") not in ("0", "false", "False")
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s: %(message)s",
    )
    update_params(seed=seed_from_env())

    rows = []
    for name, text, m_max in CORPUS:
        f = parse_poly(text)
        report = analyze(f, ScanConfig(m_max=m_max))
        best = report.best
        count = oracle_count(f)
        rows.append({
            "example": name,
            "delta": report.delta.bound,
            "verdict": report.verdict_text,
            "theorem": best.theorem if best else None,
            "m": best.m if best else None,
            "verified": bool(verify_certificate(f, best)) if best else None,
            "oracle": count,
            "sound": best is None or best.bound >= count,
        })

    table = pd.DataFrame(rows)
    print(table.to_string(index=False))
    if not table["sound"].all():
        print("UNSOUND BOUND DETECTED")
        sys.exit(1)


if __name__ == "__main__":
    main()
