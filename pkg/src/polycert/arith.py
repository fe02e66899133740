"""Integer kernels: Miller–Rabin, budgeted factorization, p-adic valuation."""
from __future__ import annotations
import logging
import math
import random
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple, Union

import gmpy2
import numpy as np

from . import config
from .config import DETERMINISTIC_MR_LIMIT
from .errors import BudgetExceeded, NoPrimeDivisor, NotPrime, ZeroArgument

log = logging.getLogger(__name__)

INFINITY = math.inf
Valuation = Union[int, float]   # finite int, or INFINITY for v_p(0)

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@lru_cache(maxsize=4)
def small_primes(limit: int) -> Tuple[int, ...]:
    """All primes below ``limit`` (sieve of Eratosthenes)."""
    if limit < 3:
        return ()
    sieve = np.ones(limit, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit - 1) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return tuple(int(p) for p in np.flatnonzero(sieve))


def _mr_round(n: int, d: int, s: int, a: int) -> bool:
    x = int(gmpy2.powmod(a, d, n))
    if x in (1, n - 1):
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller–Rabin: exact below 3.3e24, probabilistic (PARAMS.mr_rounds rounds) above."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if not all(_mr_round(n, d, s, a) for a in _MR_BASES):
        return False
    if n < DETERMINISTIC_MR_LIMIT:
        return True
    rng = random.Random(config.PARAMS.seed ^ n)
    return all(_mr_round(n, d, s, rng.randrange(2, n - 1))
               for _ in range(config.PARAMS.mr_rounds))


def prime_certainty(p: int) -> str:
    return "deterministic" if p < DETERMINISTIC_MR_LIMIT else "probable"


@dataclass(frozen=True)
class Factorization:
    """value = prod p^e * cofactor; cofactor is 1 exactly when complete."""
    value: int
    factors: Tuple[Tuple[int, int], ...]
    complete: bool
    cofactor: int = 1

    @property
    def primes(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def r(self) -> int:
        return len(self.factors)

    def exponent(self, p: int) -> int:
        return dict(self.factors).get(p, 0)

    def reassemble(self) -> int:
        out = self.cofactor
        for p, e in self.factors:
            out *= p ** e
        return out


@lru_cache(maxsize=8192)
def _trial(n: int, limit: int) -> Tuple[Tuple[Tuple[int, int], ...], int]:
    found: List[Tuple[int, int]] = []
    for p in small_primes(limit):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found.append((p, e))
    return tuple(found), n


def _brent(n: int, rng: random.Random, deadline: float) -> Optional[int]:
    """Pollard rho with Brent cycling; a nontrivial divisor of composite n, or None on timeout."""
    if n % 2 == 0:
        return 2
    while time.perf_counter() < deadline:
        y = rng.randrange(1, n - 1)
        c = rng.randrange(1, n - 1)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = int(gmpy2.gcd(q, n))
                k += m
            r <<= 1
            if time.perf_counter() >= deadline:
                return None
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = int(gmpy2.gcd(abs(x - ys), n))
        if 1 < g < n:
            return g
        # cycle closed without a split; retry with fresh parameters
    return None


def factorize(n: int, budget_ms: Optional[int] = None) -> Factorization:
    """Factor |n|: trial division below PARAMS.trial_division_limit, then Brent rho until the budget ends."""
    if n == 0:
        raise ZeroArgument("cannot factor 0")
    n = abs(n)
    params = config.PARAMS
    budget = params.factor_budget_ms if budget_ms is None else budget_ms
    deadline = time.perf_counter() + budget / 1000.0

    found, rest = _trial(n, params.trial_division_limit)
    primes = dict(found)
    cofactor = 1
    if rest > 1:
        pending = [rest]
        rng = random.Random(params.seed ^ rest)
        while pending:
            x = pending.pop()
            if is_prime(x):
                primes[x] = primes.get(x, 0) + 1
                continue
            d = _brent(x, rng, deadline)
            if d is None:
                cofactor *= x
                continue
            pending.extend((d, x // d))
    if cofactor > 1:
        log.debug("factoring budget of %d ms expired; cofactor has %d digits",
                  budget, len(str(cofactor)))
    return Factorization(
        value=n,
        factors=tuple(sorted(primes.items())),
        complete=cofactor == 1,
        cofactor=cofactor,
    )


def smallest_prime_factor(n: int, budget_ms: Optional[int] = None) -> int:
    n = abs(n)
    if n <= 1:
        raise NoPrimeDivisor(f"{n} has no prime divisor")
    for p in small_primes(config.PARAMS.trial_division_limit):
        if p * p > n:
            return n
        if n % p == 0:
            return p
    if is_prime(n):
        return n
    fac = factorize(n, budget_ms)
    if not fac.complete:
        raise BudgetExceeded(f"could not find the least prime divisor within {budget_ms} ms")
    return fac.primes[0]


def valuation(n: int, p: int) -> Valuation:
    """v_p(n) without a primality check on p."""
    if n == 0:
        return INFINITY
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def vp(n: int, p: int) -> Valuation:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    return valuation(n, p)


def frac_lt(a: int, b: int, c: Valuation, d: int) -> bool:
    """a/b < c/d for b, d > 0; an infinite c always wins."""
    if c == INFINITY:
        return True
    return a * d < c * b


def frac_le(a: Valuation, b: int, c: Valuation, d: int) -> bool:
    """a/b <= c/d for b, d > 0, with INFINITY allowed on either side."""
    if c == INFINITY:
        return True
    if a == INFINITY:
        return False
    return a * d <= c * b


def split_prime_power(value: int, p: int) -> Tuple[int, int]:
    """|value| = p^k * d with p not dividing d; returns (k, d)."""
    d = abs(value)
    k = 0
    while d % p == 0:
        d //= p
        k += 1
    return k, d
