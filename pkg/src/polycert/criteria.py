"""Factor-count criteria at a witness argument m, and their direct (unshifted) forms.

Each checker returns a :class:`CriterionOutcome`. A definite failure of a
hypothesis is ``HypothesisFailed``; ``Inconclusive`` only means the factoring
budget ran out or a zero-location premise could not be confirmed.
"""
from __future__ import annotations
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, List, Optional, Sequence, Tuple

import gmpy2

from . import config
from .arith import (
    Factorization,
    INFINITY,
    factorize,
    frac_lt,
    prime_certainty,
    smallest_prime_factor,
    split_prime_power,
    valuation,
)
from .errors import (
    BudgetExceeded,
    DegreeTooLow,
    NotPrimitive,
    WitnessIsRoot,
    ZeroConstantTerm,
    ZeroEndCoefficient,
)
from .newton import DegreeBound
from .poly import Polynomial, content, evaluate, hull_bound, reverse, taylor_shift

log = logging.getLogger(__name__)

THEOREMS = ("T1", "T2", "T3", "T4", "L3", "L4", "L5", "NP")


class Status(str, Enum):
    CERTIFIED = "Certified"
    HYPOTHESIS_FAILED = "HypothesisFailed"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class PrimeWitness:
    """One prime of the factored quantity: p^k exactly divides it; j is 0 when unused."""
    p: int
    k: int
    j: int = 0


@dataclass(frozen=True)
class Certificate:
    theorem: str
    poly: Polynomial                  # primitive, before any reversal
    bound: int
    content: int = 1
    m: Optional[int] = None
    reversed: bool = False
    sign: int = 1
    primes: Tuple[PrimeWitness, ...] = ()
    d: Optional[int] = None
    q: Optional[int] = None
    delta: Optional[DegreeBound] = None
    prime_certainty: str = "deterministic"

    @property
    def fingerprint(self) -> str:
        return self.poly.fingerprint()

    @property
    def target(self) -> Polynomial:
        """The polynomial the criterion was applied to."""
        return reverse(self.poly) if self.reversed else self.poly


@dataclass(frozen=True)
class CriterionOutcome:
    status: Status
    certificate: Optional[Certificate] = None
    detail: Optional[str] = None
    # k = 1, or the neighbouring coefficient is prime to p
    shortcut: bool = False

    @property
    def certified(self) -> bool:
        return self.status is Status.CERTIFIED


def _failed(detail: str) -> CriterionOutcome:
    return CriterionOutcome(Status.HYPOTHESIS_FAILED, detail=detail)


def _inconclusive(detail: str) -> CriterionOutcome:
    return CriterionOutcome(Status.INCONCLUSIVE, detail=detail)


def _sign(x: int) -> int:
    return -1 if x < 0 else 1


def _certainty(primes: Sequence[int]) -> str:
    if all(prime_certainty(p) == "deterministic" for p in primes):
        return "deterministic"
    return "probable"


def _prepare(f: Polynomial) -> None:
    if f.degree < 1:
        raise DegreeTooLow("criteria need a nonconstant polynomial")
    if f.constant == 0:
        raise ZeroEndCoefficient("need a_0 * a_n != 0")
    if content(f) != 1:
        raise NotPrimitive("criteria apply to primitive polynomials; take the primitive part first")


# --- witness-size conditions (integer forms of the h_f inequalities) ------

def witness_clears(f: Polynomial, m: int, d: int = 1) -> bool:
    """m >= h_f + 1 + d, which puts every zero of f(m + z) outside |z| <= d."""
    top, lead = hull_bound(f)
    return m * lead >= top + (1 + d) * lead


def shifted_base(f: Polynomial, m: int) -> int:
    """|a_n| (m - 1) - H, i.e. (m - 1 - h_f) scaled by |a_n|."""
    top, lead = hull_bound(f)
    return lead * (m - 1) - top


def power_clears(f: Polynomial, m: int, delta: int, d: int) -> bool:
    """(m - 1 - h_f)^Δ >= d, with a nonnegative base."""
    base = shifted_base(f, m)
    lead = abs(f.leading)
    return base >= 0 and base ** delta >= d * lead ** delta


# --- index conditions shared by T1, T2 and L4 ------------------------------

def j_violation(coeff_at: Callable[[int], int], p: int, k: int, j: int) -> Optional[str]:
    """First failing condition for index j, or None.

    ``coeff_at(t)`` is s_t(m) for the constant-term form and s_{n-t}(m) for the
    leading-term form.
    """
    if valuation(coeff_at(j), p) != 0:
        return "valuation_nonzero"
    if gcd(k, j) != 1:
        return "gcd(k,j)"
    for t in range(1, j):
        if not frac_lt(k, j, valuation(coeff_at(t), p), j - t):
            return "slope_condition"
    return None


def smallest_j(coeff_at: Callable[[int], int], p: int, k: int, n: int) -> Optional[int]:
    for j in range(1, n + 1):
        if j_violation(coeff_at, p, k, j) is None:
            return j
    return None


def constant_form_bound(s: Sequence[int], p: int) -> int:
    """min_{0<=i<=n} {i + v_p(s_i)}."""
    return int(min(i + valuation(c, p) for i, c in enumerate(s)))


def leading_form_bound(s: Sequence[int], p: int, k: int) -> int:
    """min_{1<=i<=n} {k, i + v_p(s_{n-i})}."""
    n = len(s) - 1
    tail = min((i + valuation(s[n - i], p) for i in range(1, n + 1)), default=INFINITY)
    return int(min(k, tail))


def _index_witnesses(fac: Factorization, coeff_at: Callable[[int], int], n: int
                     ) -> Tuple[Optional[Tuple[PrimeWitness, ...]], Optional[int]]:
    """Smallest j for each prime; on failure returns (None, failing prime)."""
    out: List[PrimeWitness] = []
    for p, k in fac.factors:
        j = smallest_j(coeff_at, p, k, n)
        if j is None:
            return None, p
        out.append(PrimeWitness(p, k, j))
    return tuple(out), None


def _least_q(s0: int, budget_ms: Optional[int]) -> Tuple[Optional[int], Optional[CriterionOutcome]]:
    """q for the condition |s_0/q| <= |s_n|, or an outcome explaining why there is none."""
    if abs(s0) == 1:
        return None, _failed("no_q")
    try:
        return smallest_prime_factor(s0, budget_ms), None
    except BudgetExceeded:
        return None, _inconclusive("incomplete_factorization")


def _root_checked(f: Polynomial, m: int) -> int:
    value = evaluate(f, m)
    if value == 0:
        raise WitnessIsRoot(f"f({m}) = 0")
    return value


# --- shifted criteria ------------------------------------------------------

def check_theorem1(f: Polynomial, m: int, budget_ms: Optional[int] = None) -> CriterionOutcome:
    """f(m) = ±p_1^k_1 ... p_r^k_r with index conditions on s_t(m): at most r factors."""
    _prepare(f)
    value = _root_checked(f, m)
    if not witness_clears(f, m):
        return _failed("m_too_small")
    fac = factorize(value, budget_ms)
    if not fac.complete:
        return _inconclusive("incomplete_factorization")
    if fac.r == 0:
        return _failed("no_prime")
    s = taylor_shift(f, m).s
    witnesses, bad = _index_witnesses(fac, lambda t: s[t], f.degree)
    if witnesses is None:
        return _failed(f"no_j:{bad}")
    cert = Certificate(
        theorem="T1", poly=f, bound=fac.r, m=m, sign=_sign(value),
        primes=witnesses, prime_certainty=_certainty(fac.primes),
    )
    return CriterionOutcome(Status.CERTIFIED, cert, shortcut=fac.r == 1)


def _leading_form(theorem: str, g: Polynomial, s: Sequence[int], budget_ms: Optional[int],
                  m: Optional[int], is_reversed: bool) -> CriterionOutcome:
    """Shared tail of T2 and L4: factor |s_n|, the q condition, index search."""
    n = len(s) - 1
    fac = factorize(s[n], budget_ms)
    if not fac.complete:
        return _inconclusive("incomplete_factorization")
    if fac.r == 0:
        return _failed("no_prime")
    q, stop = _least_q(s[0], budget_ms)
    if stop is not None:
        return stop
    if abs(s[0]) // q > abs(s[n]):
        return _failed("q_condition")
    witnesses, bad = _index_witnesses(fac, lambda t: s[n - t], n)
    if witnesses is None:
        return _failed(f"no_j:{bad}")
    cert = Certificate(
        theorem=theorem, poly=reverse(g) if is_reversed else g, bound=fac.r,
        m=m, reversed=is_reversed, sign=_sign(s[n]), primes=witnesses, q=q,
        prime_certainty=_certainty(fac.primes + (q,)),
    )
    return CriterionOutcome(Status.CERTIFIED, cert, shortcut=fac.r == 1)


def check_theorem2(f: Polynomial, m: int, budget_ms: Optional[int] = None) -> CriterionOutcome:
    """s_n(m) = a_n = ±p_1^k_1 ... p_r^k_r with index conditions on s_{n-t}(m)."""
    _prepare(f)
    _root_checked(f, m)
    if not witness_clears(f, m):
        return _failed("m_too_small")
    s = taylor_shift(f, m).s
    return _leading_form("T2", f, s, budget_ms, m, False)


def _single_prime(fac: Factorization, admissible: Callable[[int, int], bool],
                  bound_of: Callable[[int, int], int]) -> Optional[Tuple[int, int, int, int]]:
    """Best (bound, p, k, d) over primes of ``fac`` passing ``admissible(p, d)``."""
    best = None
    for p, _ in fac.factors:
        k, d = split_prime_power(fac.value, p)
        if not admissible(p, d):
            continue
        cand = (bound_of(p, k), p, k, d)
        if best is None or cand[:2] < best[:2]:
            best = cand
    return best


def check_theorem3(f: Polynomial, m: int, delta: DegreeBound,
                   budget_ms: Optional[int] = None) -> CriterionOutcome:
    """f(m) = ±p^k d with (m-1-h_f)^Δ >= d: at most min_i {i + v_p(s_i(m))} factors."""
    _prepare(f)
    value = _root_checked(f, m)
    if shifted_base(f, m) < 0:
        return _failed("m_too_small")
    fac = factorize(value, budget_ms)
    if not fac.complete:
        return _inconclusive("incomplete_factorization")
    if fac.r == 0:
        return _failed("no_prime")
    s = taylor_shift(f, m).s
    best = _single_prime(
        fac,
        lambda p, d: power_clears(f, m, delta.bound, d),
        lambda p, k: constant_form_bound(s, p),
    )
    if best is None:
        return _failed("d_too_large")
    bound, p, k, d = best
    cert = Certificate(
        theorem="T3", poly=f, bound=bound, m=m, sign=_sign(value),
        primes=(PrimeWitness(p, k),), d=d, delta=delta,
        prime_certainty=_certainty([p]),
    )
    return CriterionOutcome(Status.CERTIFIED, cert, shortcut=k == 1 or valuation(s[1], p) == 0)


def check_theorem4(f: Polynomial, m: int, delta: DegreeBound,
                   budget_ms: Optional[int] = None) -> CriterionOutcome:
    """s_n(m) = ±p^k d with (m-1-h_f)^Δ >= d and the q condition."""
    _prepare(f)
    value = _root_checked(f, m)
    if shifted_base(f, m) < 0:
        return _failed("m_too_small")
    n = f.degree
    fac = factorize(f.leading, budget_ms)
    if not fac.complete:
        return _inconclusive("incomplete_factorization")
    if fac.r == 0:
        return _failed("no_prime")
    q, stop = _least_q(value, budget_ms)
    if stop is not None:
        return stop
    if abs(value) // q > abs(f.leading):
        return _failed("q_condition")
    s = taylor_shift(f, m).s
    best = _single_prime(
        fac,
        lambda p, d: power_clears(f, m, delta.bound, d),
        lambda p, k: leading_form_bound(s, p, k),
    )
    if best is None:
        return _failed("d_too_large")
    bound, p, k, d = best
    cert = Certificate(
        theorem="T4", poly=f, bound=bound, m=m, sign=_sign(f.leading),
        primes=(PrimeWitness(p, k),), d=d, q=q, delta=delta,
        prime_certainty=_certainty([p, q]),
    )
    return CriterionOutcome(Status.CERTIFIED, cert, shortcut=k == 1 or valuation(s[n - 1], p) == 0)


# --- zero location ---------------------------------------------------------

def root_exclusion(g: Polynomial, rho: Fraction) -> bool:
    """sum_{i>=1} |s_i| rho^i < |s_0|; when true every zero of g has |z| > rho."""
    if g.is_zero or g.constant == 0:
        raise ZeroConstantTerm("dominance test needs s_0 != 0")
    rho = Fraction(rho)
    if rho <= 0:
        raise ValueError("rho must be positive")
    a, b = rho.numerator, rho.denominator
    n = g.degree
    # clear denominators: multiply both sides by b^n
    lhs = sum(abs(c) * a ** i * b ** (n - i) for i, c in enumerate(g.coeffs) if i)
    return lhs < abs(g.constant) * b ** n


def nth_root_upper(d: int, delta: int) -> Fraction:
    """Smallest rational >= d^(1/Δ) with denominator at most PARAMS.root_denominator."""
    if d < 1 or delta < 1:
        raise ValueError("d and Δ must be positive")
    return _root_upper(d, delta, config.PARAMS.root_denominator)


@lru_cache(maxsize=1024)
def _root_upper(d: int, delta: int, max_den: int) -> Fraction:
    best = None
    for den in range(1, max_den + 1):
        root, exact = gmpy2.iroot(d * den ** delta, delta)
        cand = Fraction(int(root) if exact else int(root) + 1, den)
        if best is None or cand < best:
            best = cand
        if exact:
            break
    return best


def zeros_outside(g: Polynomial, d: int, delta: int) -> bool:
    return root_exclusion(g, nth_root_upper(d, delta))


# --- direct forms ----------------------------------------------------------

def check_lemma3_direct(g: Polynomial, delta: DegreeBound, budget_ms: Optional[int] = None,
                        is_reversed: bool = False) -> CriterionOutcome:
    """s_0 = ±p^k d and no zero in |z| <= d^(1/Δ): at most min_i {i + v_p(s_i)} factors.

    With ``is_reversed`` the certificate stores reverse(g) as the polynomial.
    """
    _prepare(g)
    s = g.coeffs
    fac = factorize(s[0], budget_ms)
    if not fac.complete:
        return _inconclusive("incomplete_factorization")
    if fac.r == 0:
        return _failed("no_prime")
    best = _single_prime(
        fac,
        lambda p, d: zeros_outside(g, d, delta.bound),
        lambda p, k: constant_form_bound(s, p),
    )
    if best is None:
        return _inconclusive("root_location_unverified")
    bound, p, k, d = best
    cert = Certificate(
        theorem="L3", poly=reverse(g) if is_reversed else g, bound=bound,
        reversed=is_reversed, sign=_sign(s[0]), primes=(PrimeWitness(p, k),),
        d=d, delta=delta, prime_certainty=_certainty([p]),
    )
    return CriterionOutcome(Status.CERTIFIED, cert, shortcut=k == 1 or valuation(s[1], p) == 0)


def check_lemma4_direct(g: Polynomial, budget_ms: Optional[int] = None,
                        is_reversed: bool = False) -> CriterionOutcome:
    """Zeros in |z| > 1 and s_n = ±p_1^k_1 ... p_r^k_r with index and q conditions."""
    _prepare(g)
    if not root_exclusion(g, Fraction(1)):
        return _inconclusive("root_location_unverified")
    return _leading_form("L4", g, g.coeffs, budget_ms, None, is_reversed)


def check_lemma5_direct(g: Polynomial, delta: DegreeBound, budget_ms: Optional[int] = None,
                        is_reversed: bool = False) -> CriterionOutcome:
    """s_n = ±p^k d, zeros outside |z| <= d^(1/Δ) and the q condition."""
    _prepare(g)
    s = g.coeffs
    n = g.degree
    fac = factorize(s[n], budget_ms)
    if not fac.complete:
        return _inconclusive("incomplete_factorization")
    if fac.r == 0:
        return _failed("no_prime")
    q, stop = _least_q(s[0], budget_ms)
    if stop is not None:
        return stop
    if abs(s[0]) // q > abs(s[n]):
        return _failed("q_condition")
    best = _single_prime(
        fac,
        lambda p, d: zeros_outside(g, d, delta.bound),
        lambda p, k: leading_form_bound(s, p, k),
    )
    if best is None:
        return _inconclusive("root_location_unverified")
    bound, p, k, d = best
    cert = Certificate(
        theorem="L5", poly=reverse(g) if is_reversed else g, bound=bound,
        reversed=is_reversed, sign=_sign(s[n]), primes=(PrimeWitness(p, k),),
        d=d, q=q, delta=delta, prime_certainty=_certainty([p, q]),
    )
    return CriterionOutcome(Status.CERTIFIED, cert, shortcut=k == 1 or valuation(s[n - 1], p) == 0)
