"""Brute-force factorization of small integer polynomials (Kronecker's method).

Ground truth for the test suite and the ``oracle`` subcommand. Nothing on the
certifying path imports this module.
"""
from __future__ import annotations
import logging
from dataclasses import dataclass
from itertools import count
from math import gcd
from typing import List, Optional, Sequence, Tuple

from . import config
from .arith import factorize
from .errors import OracleBudgetExceeded, OracleScaleExceeded, ZeroPolynomial
from .poly import Polynomial, evaluate, primitive_part

log = logging.getLogger(__name__)

Coeffs = Tuple[int, ...]


@dataclass(frozen=True)
class OracleLimits:
    max_degree: int
    coeff_cap: int
    search_cap: int

    @classmethod
    def default(cls) -> "OracleLimits":
        p = config.PARAMS
        return cls(p.oracle_max_degree, p.oracle_coeff_cap, p.oracle_search_cap)


@dataclass(frozen=True)
class OracleFactorization:
    unit: int
    content: int
    factors: Tuple[Polynomial, ...]   # primitive, positive leading coefficient, canonical order

    @property
    def count(self) -> int:
        return len(self.factors)

    def reassemble(self) -> Polynomial:
        acc: Coeffs = (self.unit * self.content,)
        for g in self.factors:
            acc = _mul(acc, g.coeffs)
        return Polynomial(acc)


def _mul(a: Sequence[int], b: Sequence[int]) -> Coeffs:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _exact_div(f: Sequence[int], g: Sequence[int]) -> Optional[Coeffs]:
    """f / g in Z[z] when g divides f exactly, else None."""
    rem = list(f)
    dg = len(g) - 1
    lead = g[-1]
    if len(rem) < len(g):
        return None
    quot = [0] * (len(rem) - dg)
    for k in range(len(quot) - 1, -1, -1):
        c, r = divmod(rem[k + dg], lead)
        if r:
            return None
        quot[k] = c
        if c:
            for i, y in enumerate(g):
                rem[k + i] -= c * y
    if any(rem[:dg]):
        return None
    return tuple(quot)


def _divisors(n: int) -> List[int]:
    """Positive divisors of |n| (n != 0), ascending."""
    fac = factorize(n)
    if not fac.complete:
        raise OracleBudgetExceeded(f"could not factor {n} for divisor enumeration")
    divs = [1]
    for p, e in fac.factors:
        divs = [d * p ** i for d in divs for i in range(e + 1)]
    return sorted(divs)


class _Search:
    """Node counter shared by one oracle call."""

    def __init__(self, cap: int):
        self.cap = cap
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.cap:
            raise OracleBudgetExceeded(f"more than {self.cap} candidate nodes")


def _positive_lead(c: Coeffs) -> Coeffs:
    return tuple(-x for x in c) if c[-1] < 0 else c


def _strip_rational_roots(f: Coeffs) -> Tuple[List[Coeffs], Coeffs]:
    """Pull out every linear factor (q z - p), z included, with multiplicity."""
    found: List[Coeffs] = []
    while len(f) > 1 and f[0] == 0:
        found.append((0, 1))
        f = f[1:]
    if len(f) <= 2:
        return found, f
    for q in _divisors(f[-1]):
        for p in _divisors(f[0]):
            if gcd(p, q) != 1:
                continue
            for num in (p, -p):
                lin = (-num, q)
                while len(f) > 2:
                    quot = _exact_div(f, lin)
                    if quot is None:
                        break
                    found.append(lin)
                    f = quot
    return found, f


def _points(f: Coeffs, needed: int) -> List[Tuple[int, int, List[int]]]:
    """(x, f(x), divisors) for the ``needed`` pool points with fewest divisors, in pool order."""
    poly = Polynomial(f)
    pool = []
    for step in count():
        if len(pool) >= 2 * needed + 1:
            break
        for x in ((0,) if step == 0 else (step, -step)):
            y = evaluate(poly, x)
            if y != 0:
                pool.append((x, y))
    ranked = sorted(range(len(pool)), key=lambda i: (len(_divisors(pool[i][1])), i))
    chosen = sorted(ranked[:needed])
    return [(pool[i][0], pool[i][1], _divisors(pool[i][1])) for i in chosen]


def _newton_to_coeffs(xs: Sequence[int], cs: Sequence[int]) -> Coeffs:
    g: Coeffs = (cs[-1],)
    for k in range(len(cs) - 2, -1, -1):
        g = _mul(g, (-xs[k], 1))
        g = (g[0] + cs[k],) + g[1:]
    return g


def _find_factor(f: Coeffs, d: int, search: _Search) -> Optional[Tuple[Coeffs, Coeffs]]:
    """A degree-d factor of f and its cofactor, or None.

    Depth-first over divisor choices at d+1 points; the Newton divided
    differences of an integer polynomial at integer nodes are integers, so a
    non-integral difference prunes the subtree.
    """
    pts = _points(f, d + 1)
    xs = [x for x, _, _ in pts]
    lead, const = f[-1], f[0]

    def dfs(k: int, prev_row: List[int], newton: List[int]):
        x_k = xs[k]
        divs = pts[k][2]
        choices = divs if k == 0 else [s * v for v in divs for s in (1, -1)]
        for y in choices:
            search.tick()
            row = [y]
            ok = True
            for l in range(1, k + 1):
                num = row[l - 1] - prev_row[l - 1]
                den = x_k - xs[k - l]
                if num % den:
                    ok = False
                    break
                row.append(num // den)
            if not ok:
                continue
            cs = newton + [row[k]]
            if k < d:
                hit = dfs(k + 1, row, cs)
                if hit is not None:
                    return hit
                continue
            c_d = cs[-1]
            if c_d == 0 or lead % c_d:
                continue
            g = _positive_lead(_newton_to_coeffs(xs, cs))
            if g[0] == 0 or const % g[0]:
                continue
            quot = _exact_div(f, g)
            if quot is not None:
                return g, quot
        return None

    return dfs(0, [], [])


def _split(f: Coeffs, search: _Search) -> List[Coeffs]:
    n = len(f) - 1
    if n <= 1:
        return [f] if n == 1 else []
    for d in range(1, n // 2 + 1):
        hit = _find_factor(f, d, search)
        if hit is not None:
            g, quot = hit
            log.debug("oracle: degree-%d factor %s", d, g)
            # g has the least degree of any factor, so it is irreducible
            return [g] + _split(quot, search)
    return [f]


def oracle_factor(f: Polynomial, limits: Optional[OracleLimits] = None) -> OracleFactorization:
    limits = limits or OracleLimits.default()
    if f.is_zero:
        raise ZeroPolynomial("cannot factor the zero polynomial")
    if f.degree > limits.max_degree:
        raise OracleScaleExceeded(f"degree {f.degree} exceeds {limits.max_degree}")
    if max(abs(a) for a in f.coeffs) > limits.coeff_cap:
        raise OracleScaleExceeded(f"coefficient exceeds {limits.coeff_cap}")

    c, prim = primitive_part(f)
    unit = -1 if prim.leading < 0 else 1
    work = _positive_lead(prim.coeffs)
    linear, rest = _strip_rational_roots(work)
    search = _Search(limits.search_cap)
    parts = [_positive_lead(g) for g in linear] + _split(rest, search)
    factors = tuple(sorted((Polynomial(g) for g in parts), key=lambda g: (g.degree, g.coeffs)))
    return OracleFactorization(unit=unit, content=c, factors=factors)


def oracle_count(f: Polynomial, limits: Optional[OracleLimits] = None) -> int:
    """Nonconstant irreducible factors of f, with multiplicity."""
    return oracle_factor(f, limits).count


def oracle_irreducible(g: Polynomial, limits: Optional[OracleLimits] = None) -> bool:
    return g.degree >= 1 and oracle_count(g, limits) == 1
