"""Witness search, certificate selection, independent verification and JSON I/O."""
from __future__ import annotations
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field, replace
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import jsonschema
import pandas as pd
from joblib import Parallel, delayed

from . import config
from .arith import is_prime, prime_certainty, smallest_prime_factor
from .config import SCHEMA_TAG, Params, ScanConfig
from .criteria import (
    THEOREMS,
    Certificate,
    CriterionOutcome,
    PrimeWitness,
    Status,
    check_lemma3_direct,
    check_lemma4_direct,
    check_lemma5_direct,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    check_theorem4,
    constant_form_bound,
    j_violation,
    leading_form_bound,
    power_clears,
    root_exclusion,
    witness_clears,
    zeros_outside,
)
from .errors import (
    BudgetExceeded,
    DegreeTooLow,
    EmptyWitnessRange,
    Malformed,
    NoPrimeDivisor,
    ZeroEndCoefficient,
    ZeroPolynomial,
)
from .newton import (
    DegreeBound,
    TRIVIAL_BOUND,
    best_delta,
    degree_bound_holds,
    irreducible_by_degree,
)
from .poly import Polynomial, height, primitive_part, reverse, taylor_shift

log = logging.getLogger(__name__)

# Equal bounds: fewer side conditions first
PREFERENCE = ("T1", "T2", "T3", "T4", "L4", "L5", "L3", "NP")

IRREDUCIBLE = "Irreducible"
AT_MOST = "AtMost"
UNKNOWN = "Unknown"


def preference_key(cert: Certificate) -> Tuple[int, int, int, bool]:
    m = cert.m if cert.m is not None else 0
    return cert.bound, PREFERENCE.index(cert.theorem), m, cert.reversed


@dataclass(frozen=True)
class AnalysisReport:
    polynomial: Polynomial
    content: int
    primitive: Polynomial
    delta: DegreeBound
    best: Optional[Certificate]
    all_certificates: Tuple[Certificate, ...]
    m_range: Optional[Tuple[int, int]]
    tried_count: int
    inconclusive_count: int
    timing: Dict[str, float] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        if self.best is None:
            return UNKNOWN
        return IRREDUCIBLE if self.best.bound == 1 else AT_MOST

    @property
    def bound(self) -> Optional[int]:
        return None if self.best is None else self.best.bound

    @property
    def verdict_text(self) -> str:
        return f"{AT_MOST}({self.bound})" if self.verdict == AT_MOST else self.verdict

    def to_frame(self) -> pd.DataFrame:
        rows = [{
            "theorem": c.theorem,
            "m": c.m,
            "reversed": c.reversed,
            "bound": c.bound,
            "primes": " ".join(f"{w.p}^{w.k}" + (f"@j{w.j}" if w.j else "") for w in c.primes),
            "d": c.d,
            "q": c.q,
            "delta": None if c.delta is None else c.delta.bound,
        } for c in sorted(self.all_certificates, key=preference_key)]
        cols = ["theorem", "m", "reversed", "bound", "primes", "d", "q", "delta"]
        return pd.DataFrame(rows, columns=cols)


def batch_iter(start: int, end: int, size: int) -> Iterator[range]:
    for lo in range(start, end + 1, size):
        yield range(lo, min(lo + size, end + 1))


def _scan_chunk(f: Polynomial, ms: range, delta: DegreeBound, criteria: frozenset,
                budget_ms: int, params: Params) -> Tuple[List[Certificate], int, int, int]:
    """Run the shifted criteria over ``ms``; stops at the first bound-1 certificate."""
    # joblib workers start from a fresh import of the config module
    config.update_params(**asdict(params))
    found: List[Certificate] = []
    tried = inconclusive = 0
    last = ms.start - 1
    for m in ms:
        tried += 1
        last = m
        outcomes: List[CriterionOutcome] = []
        if "t1" in criteria:
            outcomes.append(check_theorem1(f, m, budget_ms))
        if "t2" in criteria:
            outcomes.append(check_theorem2(f, m, budget_ms))
        if "t3" in criteria:
            outcomes.append(check_theorem3(f, m, delta, budget_ms))
        if "t4" in criteria:
            outcomes.append(check_theorem4(f, m, delta, budget_ms))
        for out in outcomes:
            if out.status is Status.INCONCLUSIVE:
                inconclusive += 1
            elif out.certified:
                found.append(out.certificate)
        log.debug("m=%d: %s", m, ", ".join(o.status.value for o in outcomes))
        if any(c.bound == 1 for c in found):
            break
    return found, tried, inconclusive, last


def _direct(f: Polynomial, delta: DegreeBound, criteria: frozenset,
            budget_ms: int) -> Tuple[List[Certificate], int]:
    found: List[Certificate] = []
    inconclusive = 0
    for g, rev in ((f, False), (reverse(f), True)):
        outcomes = []
        if "l3" in criteria:
            outcomes.append(check_lemma3_direct(g, delta, budget_ms, is_reversed=rev))
        if "l4" in criteria:
            outcomes.append(check_lemma4_direct(g, budget_ms, is_reversed=rev))
        if "l5" in criteria:
            outcomes.append(check_lemma5_direct(g, delta, budget_ms, is_reversed=rev))
        for out in outcomes:
            if out.status is Status.INCONCLUSIVE:
                inconclusive += 1
            elif out.certified:
                found.append(out.certificate)
    return found, inconclusive


def witness_start(f: Polynomial, m_min: Optional[int] = None) -> int:
    """Smallest integer m with m >= h_f + 2, raised to ``m_min``."""
    start = math.ceil(height(f)) + 2
    return start if m_min is None else max(m_min, start)


def analyze(f: Polynomial, scan: Optional[ScanConfig] = None) -> AnalysisReport:
    scan = scan or ScanConfig()
    params = config.PARAMS
    if f.is_zero:
        raise ZeroPolynomial("nothing to analyze")
    c, prim = primitive_part(f)
    if prim.degree < 1:
        raise DegreeTooLow("constant polynomial")
    if prim.constant == 0:
        raise ZeroEndCoefficient("need a_0 * a_n != 0")
    budget = scan.budget_ms()
    timing: Dict[str, float] = {}

    t0 = time.perf_counter()
    delta = best_delta(prim, budget)
    timing["delta"] = time.perf_counter() - t0
    log.info("Δ_f = %d (%s%s)", delta.bound, delta.source,
             "" if delta.is_trivial else f", p={delta.prime}, j={delta.j}")

    def finish(found: Sequence[Certificate], m_range, tried: int, inconclusive: int) -> AnalysisReport:
        certs = tuple(replace(cert, content=c) for cert in found)
        best = min(certs, key=preference_key) if certs else None
        report = AnalysisReport(
            polynomial=f, content=c, primitive=prim, delta=delta, best=best,
            all_certificates=certs, m_range=m_range, tried_count=tried,
            inconclusive_count=inconclusive, timing=timing,
        )
        log.info("Verdict: %s", report.verdict_text)
        return report

    if irreducible_by_degree(prim, delta):
        log.info("deg %d < 2Δ: irreducible from the degree floor", prim.degree)
        cert = Certificate(theorem="NP", poly=prim, bound=1, delta=delta)
        return finish([cert], None, 0, 0)

    t0 = time.perf_counter()
    found, inconclusive = _direct(prim, delta, scan.criteria, budget)
    timing["direct"] = time.perf_counter() - t0
    if any(cert.bound == 1 for cert in found):
        return finish(found, None, 0, inconclusive)

    start = witness_start(prim, scan.m_min)
    end = scan.m_max if scan.m_max is not None else math.ceil(height(prim)) + params.m_window
    if end < start:
        if found:
            log.info("witness range [%d, %d] is empty; keeping direct certificates", start, end)
            return finish(found, None, 0, inconclusive)
        raise EmptyWitnessRange(f"witness range [{start}, {end}] is empty")

    log.info("Scanning m in [%d, %d] …", start, end)
    t0 = time.perf_counter()
    tried = 0
    scanned: List[Certificate] = []
    chunks = list(batch_iter(start, end, params.chunk_size))
    wave = max(1, params.n_jobs)
    last_m = start - 1
    for w in range(0, len(chunks), wave):
        batch = chunks[w:w + wave]
        results = Parallel(n_jobs=params.n_jobs)(
            delayed(_scan_chunk)(prim, ms, delta, scan.criteria, budget, params)
            for ms in batch
        )
        for certs, n_tried, n_inc, last in results:
            scanned.extend(certs)
            tried += n_tried
            inconclusive += n_inc
            last_m = max(last_m, last)
        stops = [cert.m for cert in scanned if cert.bound == 1]
        if stops:
            # a serial scan stops after the first m reaching bound 1
            m_stop = min(stops)
            scanned = [cert for cert in scanned if cert.m <= m_stop]
            last_m = m_stop
            tried = m_stop - start + 1
            log.info("bound 1 certified at m=%d; stopping scan early", m_stop)
            break
    timing["scan"] = time.perf_counter() - t0
    return finish(found + scanned, (start, last_m), tried, inconclusive)


# --- verification ------------------------------------------------------------

@dataclass(frozen=True)
class Verification:
    passed: bool
    failure: Optional[str] = None

    def __bool__(self) -> bool:
        return self.passed


class _Reject(Exception):
    def __init__(self, condition: str):
        super().__init__(condition)
        self.condition = condition


def _require(ok: bool, condition: str) -> None:
    if not ok:
        raise _Reject(condition)


def _check_well_formed(cert: Certificate) -> None:
    t = cert.theorem
    if t not in THEOREMS:
        raise Malformed(f"unknown theorem {t!r}")
    if cert.bound < 1 or cert.sign not in (1, -1) or cert.content < 1:
        raise Malformed("bound, sign or content out of range")
    if cert.prime_certainty not in ("deterministic", "probable"):
        raise Malformed("bad prime_certainty")
    shifted = t in ("T1", "T2", "T3", "T4")
    if shifted != (cert.m is not None):
        raise Malformed(f"{t} {'needs' if shifted else 'takes no'} witness m")
    if cert.reversed and t not in ("L3", "L4", "L5"):
        raise Malformed("only direct lemmas run on the reversal")
    single = t in ("T3", "T4", "L3", "L5")
    if single and (len(cert.primes) != 1 or cert.d is None or cert.delta is None):
        raise Malformed(f"{t} needs one prime, d and delta")
    if t in ("T2", "T4", "L4", "L5") and cert.q is None:
        raise Malformed(f"{t} needs q")
    if t == "NP" and cert.delta is None:
        raise Malformed("NP needs delta")


def _check_primes(cert: Certificate) -> None:
    listed = [w.p for w in cert.primes] + ([cert.q] if cert.q is not None else [])
    _require(all(is_prime(p) for p in listed), "prime")
    expected = "deterministic" if all(
        prime_certainty(p) == "deterministic" for p in listed) else "probable"
    _require(cert.prime_certainty == expected, "prime_certainty")


def _check_product(cert: Certificate, value: int) -> None:
    ps = [w.p for w in cert.primes]
    _require(ps == sorted(set(ps)), "prime_order")
    _require(all(w.k >= 1 for w in cert.primes), "exponent")
    prod = cert.sign
    for w in cert.primes:
        prod *= w.p ** w.k
    _require(prod == value, "product")


def _check_indices(cert: Certificate, coeff_at, n: int) -> None:
    for w in cert.primes:
        _require(1 <= w.j <= n, "j_range")
        failure = j_violation(coeff_at, w.p, w.k, w.j)
        if failure is not None:
            raise _Reject(failure)
        for smaller in range(1, w.j):
            _require(j_violation(coeff_at, w.p, w.k, smaller) is not None, "j_minimal")


def _check_q(cert: Certificate, s0: int, sn: int) -> None:
    try:
        q = smallest_prime_factor(s0)
    except NoPrimeDivisor:
        raise _Reject("no_q") from None
    except BudgetExceeded:
        raise _Reject("q_unverifiable") from None
    _require(cert.q == q, "q_smallest")
    _require(abs(s0) // q <= abs(sn), "q_condition")


def _check_single(cert: Certificate, value: int) -> int:
    """p^k * d = |value| with p not dividing d; returns p."""
    (w,) = cert.primes
    _require(w.j == 0, "j_unused")
    _require(cert.d >= 1 and cert.d % w.p != 0, "d_coprime")
    _require(w.k >= 1 and w.p ** w.k * cert.d == abs(value), "product")
    _require(cert.sign == (-1 if value < 0 else 1), "sign")
    return w.p


def _verify(f: Polynomial, cert: Certificate) -> None:
    c, prim = primitive_part(f)
    _require(prim == cert.poly, "polynomial")
    _require(c == cert.content, "content")
    _check_primes(cert)
    if cert.delta is not None:
        _require(degree_bound_holds(prim, cert.delta), "delta")

    t = cert.theorem
    g = cert.target
    n = g.degree
    if t == "NP":
        _require(irreducible_by_degree(prim, cert.delta), "degree_floor")
        _require(cert.bound == 1, "bound")
        return

    if cert.m is not None:
        s = taylor_shift(g, cert.m).s
        _require(s[0] != 0, "witness_is_root")
    else:
        s = g.coeffs

    if t in ("T1", "T2"):
        _require(witness_clears(g, cert.m), "m_bound")
    if t == "L4":
        _require(root_exclusion(g, 1), "root_location")

    if t == "T1":
        _check_product(cert, s[0])
        _check_indices(cert, lambda i: s[i], n)
        _require(cert.bound == len(cert.primes), "bound")
    elif t in ("T2", "L4"):
        _check_product(cert, s[n])
        _check_q(cert, s[0], s[n])
        _check_indices(cert, lambda i: s[n - i], n)
        _require(cert.bound == len(cert.primes), "bound")
    elif t in ("T3", "L3"):
        p = _check_single(cert, s[0])
        if t == "T3":
            _require(power_clears(g, cert.m, cert.delta.bound, cert.d), "d_bound")
        else:
            _require(zeros_outside(g, cert.d, cert.delta.bound), "root_location")
        _require(cert.bound == constant_form_bound(s, p), "bound")
    else:  # T4, L5
        p = _check_single(cert, s[n])
        _check_q(cert, s[0], s[n])
        if t == "T4":
            _require(power_clears(g, cert.m, cert.delta.bound, cert.d), "d_bound")
        else:
            _require(zeros_outside(g, cert.d, cert.delta.bound), "root_location")
        _require(cert.bound == leading_form_bound(s, p, cert.primes[0].k), "bound")


def verify_certificate(f: Polynomial, cert: Certificate) -> Verification:
    """Re-derive every condition of the certificate's criterion from f and its witnesses."""
    _check_well_formed(cert)
    try:
        _verify(f, cert)
    except _Reject as rej:
        log.debug("certificate rejected: %s", rej.condition)
        return Verification(False, rej.condition)
    return Verification(True)


# --- JSON --------------------------------------------------------------------

_INT_TEXT = {"type": "string", "pattern": "^-?[0-9]+$"}
_NAT_TEXT = {"type": "string", "pattern": "^[0-9]+$"}

CERT_SCHEMA = {
    "type": "object",
    "required": ["schema", "theorem", "poly", "content", "reversed", "sign",
                 "primes", "bound", "prime_certainty"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_TAG},
        "theorem": {"enum": list(THEOREMS)},
        "poly": {"type": "array", "items": _INT_TEXT, "minItems": 2},
        "content": _NAT_TEXT,
        "m": _INT_TEXT,
        "reversed": {"type": "boolean"},
        "sign": {"enum": [1, -1]},
        "primes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["p", "k", "j"],
                "additionalProperties": False,
                "properties": {
                    "p": _NAT_TEXT,
                    "k": {"type": "integer", "minimum": 1},
                    "j": {"type": "integer", "minimum": 0},
                },
            },
        },
        "d": _NAT_TEXT,
        "q": _NAT_TEXT,
        "delta": {
            "type": "object",
            "required": ["bound"],
            "additionalProperties": False,
            "properties": {
                "bound": {"type": "integer", "minimum": 1},
                "p": _NAT_TEXT,
                "j": {"type": "integer", "minimum": 1},
                "d1": {"type": "integer", "minimum": 1},
                "d2": {"type": "integer", "minimum": 1},
            },
        },
        "bound": {"type": "integer", "minimum": 1},
        "prime_certainty": {"enum": ["deterministic", "probable"]},
    },
}


def _delta_to_dict(delta: DegreeBound) -> dict:
    out = {"bound": delta.bound}
    if not delta.is_trivial:
        out["p"] = str(delta.prime)
        out["j"] = delta.j
        out["d1"] = delta.d1
        if delta.d2 is not None:
            out["d2"] = delta.d2
    return out


def _delta_from_dict(obj: dict) -> DegreeBound:
    if "p" not in obj:
        if obj["bound"] != 1 or len(obj) != 1:
            raise Malformed("a delta without a prime must be the trivial bound 1")
        return TRIVIAL_BOUND
    return DegreeBound(
        bound=obj["bound"], prime=int(obj["p"]), j=obj.get("j"),
        d1=obj.get("d1"), d2=obj.get("d2"), source="T5",
    )


def certificate_to_dict(cert: Certificate) -> dict:
    out = {
        "schema": SCHEMA_TAG,
        "theorem": cert.theorem,
        "poly": [str(a) for a in cert.poly.coeffs],
        "content": str(cert.content),
        "reversed": cert.reversed,
        "sign": cert.sign,
        "primes": [{"p": str(w.p), "k": w.k, "j": w.j} for w in cert.primes],
        "bound": cert.bound,
        "prime_certainty": cert.prime_certainty,
    }
    if cert.m is not None:
        out["m"] = str(cert.m)
    if cert.d is not None:
        out["d"] = str(cert.d)
    if cert.q is not None:
        out["q"] = str(cert.q)
    if cert.delta is not None:
        out["delta"] = _delta_to_dict(cert.delta)
    return out


def certificate_from_dict(obj: dict) -> Certificate:
    try:
        jsonschema.validate(obj, CERT_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise Malformed(f"certificate schema violation: {exc.message}") from None
    poly = Polynomial(tuple(int(a) for a in obj["poly"]))
    if poly.degree < 1:
        raise Malformed("certificate polynomial must be nonconstant")
    return Certificate(
        theorem=obj["theorem"],
        poly=poly,
        bound=obj["bound"],
        content=int(obj["content"]),
        m=int(obj["m"]) if "m" in obj else None,
        reversed=obj["reversed"],
        sign=obj["sign"],
        primes=tuple(PrimeWitness(int(w["p"]), w["k"], w["j"]) for w in obj["primes"]),
        d=int(obj["d"]) if "d" in obj else None,
        q=int(obj["q"]) if "q" in obj else None,
        delta=_delta_from_dict(obj["delta"]) if "delta" in obj else None,
        prime_certainty=obj["prime_certainty"],
    )


def certificate_to_json(cert: Certificate, indent: Optional[int] = None) -> str:
    return json.dumps(certificate_to_dict(cert), indent=indent)


def certificate_from_json(text: str) -> Certificate:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise Malformed(f"not JSON: {exc}") from None
    return certificate_from_dict(obj)


def report_to_dict(report: AnalysisReport) -> dict:
    return {
        "poly": [str(a) for a in report.polynomial.coeffs],
        "content": str(report.content),
        "delta": _delta_to_dict(report.delta),
        "verdict": report.verdict,
        "bound": report.bound,
        "best": None if report.best is None else certificate_to_dict(report.best),
        "certificates": [certificate_to_dict(c) for c in report.all_certificates],
        "tried_m": None if report.m_range is None else {
            "start": str(report.m_range[0]),
            "end": str(report.m_range[1]),
            "count": report.tried_count,
        },
        "inconclusive": report.inconclusive_count,
        "timing": {k: round(v, 6) for k, v in report.timing.items()},
    }


def report_to_json(report: AnalysisReport, indent: Optional[int] = 2) -> str:
    return json.dumps(report_to_dict(report), indent=indent)
