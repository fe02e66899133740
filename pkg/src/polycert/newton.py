"""Newton polygons with respect to a prime and the factor-degree floor Δ_f."""
from __future__ import annotations
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

from .arith import factorize, frac_le, is_prime, valuation
from .errors import (
    DegenerateSegment,
    HypothesisFailed,
    NotPrime,
    ZeroEndCoefficient,
)
from .poly import Polynomial

log = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class ValuationPoint:
    x: int
    y: int


@dataclass(frozen=True)
class Edge:
    start: ValuationPoint
    end: ValuationPoint

    @property
    def width(self) -> int:
        return self.end.x - self.start.x

    @property
    def slope(self) -> Fraction:
        return Fraction(self.end.y - self.start.y, self.width)

    @property
    def lattice_count(self) -> int:
        return lattice_count(self.start, self.end)

    def lattice_points(self) -> List[ValuationPoint]:
        """Every lattice point on the edge, endpoints included, left to right."""
        steps = self.lattice_count - 1
        dx = self.width // steps
        dy = (self.end.y - self.start.y) // steps
        return [ValuationPoint(self.start.x + t * dx, self.start.y + t * dy)
                for t in range(steps + 1)]


@dataclass(frozen=True)
class NewtonPolygon:
    prime: Optional[int]
    vertices: Tuple[ValuationPoint, ...]

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return tuple(Edge(a, b) for a, b in zip(self.vertices, self.vertices[1:]))

    @property
    def segment_count(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True)
class DegreeBound:
    """No nonconstant factor has degree below ``bound``."""
    bound: int
    prime: Optional[int] = None
    j: Optional[int] = None
    d1: Optional[int] = None
    d2: Optional[int] = None
    source: str = "trivial"

    @property
    def is_trivial(self) -> bool:
        return self.source == "trivial"


TRIVIAL_BOUND = DegreeBound(bound=1)


def _require_end_coefficients(f: Polynomial) -> None:
    if f.is_zero or f.constant == 0:
        raise ZeroEndCoefficient("need a_0 * a_n != 0")


def valuation_points(f: Polynomial, prime: int) -> List[ValuationPoint]:
    _require_end_coefficients(f)
    if not is_prime(prime):
        raise NotPrime(f"{prime} is not prime")
    return [ValuationPoint(i, valuation(a, prime))
            for i, a in enumerate(f.coeffs) if a != 0]


def _cross(o: ValuationPoint, a: ValuationPoint, b: ValuationPoint) -> int:
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def lower_hull(points: Sequence[ValuationPoint], prime: Optional[int] = None) -> NewtonPolygon:
    """Monotone-chain lower convex hull; collinear points are not kept as vertices."""
    lower: List[ValuationPoint] = []
    for pt in sorted(set(points)):
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], pt) <= 0:
            lower.pop()
        lower.append(pt)
    return NewtonPolygon(prime=prime, vertices=tuple(lower))


def newton_polygon(f: Polynomial, prime: int) -> NewtonPolygon:
    return lower_hull(valuation_points(f, prime), prime=prime)


def lattice_count(a: ValuationPoint, b: ValuationPoint) -> int:
    if a == b:
        raise DegenerateSegment("segment endpoints coincide")
    return 1 + gcd(abs(a.x - b.x), abs(a.y - b.y))


def theorem5_bound(f: Polynomial, prime: int, j: int) -> DegreeBound:
    """Check the two-edge Newton polygon hypothesis at (prime, j) and return k_f.

    Raises :class:`HypothesisFailed` naming the first failing condition and
    coefficient index.
    """
    _require_end_coefficients(f)
    if not is_prime(prime):
        raise NotPrime(f"{prime} is not prime")
    n = f.degree
    if not 1 <= j <= n:
        raise HypothesisFailed("j_out_of_range", j)
    v = [valuation(a, prime) for a in f.coeffs]
    if v[j] != 0:
        raise HypothesisFailed("unit_coefficient", j)
    for i in range(j):
        if not frac_le(v[0], j, v[i], j - i):
            raise HypothesisFailed("left_slope", i)
    for i in range(j + 1, n):
        if not frac_le(v[n], n - j, v[i], i - j):
            raise HypothesisFailed("right_slope", i)

    d1 = gcd(v[0], j)
    if j == n:
        return DegreeBound(bound=n // d1, prime=prime, j=j, d1=d1, source="T5")
    d2 = gcd(v[n], n - j)
    return DegreeBound(
        bound=min(j // d1, (n - j) // d2),
        prime=prime, j=j, d1=d1, d2=d2, source="T5",
    )


def delta_candidates(f: Polynomial, prime: int) -> List[DegreeBound]:
    """Every j at which the hypothesis holds for ``prime``."""
    out = []
    for j in range(1, f.degree + 1):
        try:
            out.append(theorem5_bound(f, prime, j))
        except HypothesisFailed:
            continue
    return out


def candidate_primes(f: Polynomial, budget_ms: Optional[int] = None) -> List[int]:
    """Primes of a_0 * a_n recovered within the budget."""
    _require_end_coefficients(f)
    primes = set()
    for value in (f.constant, f.leading):
        fac = factorize(value, budget_ms)
        if not fac.complete:
            log.debug("partial factorization of %d; trying %d recovered primes",
                      value, fac.r)
        primes.update(fac.primes)
    return sorted(primes)


def best_delta(f: Polynomial, budget_ms: Optional[int] = None) -> DegreeBound:
    """Largest k_f over primes of a_0 * a_n and j = 1..n; ties go to the smaller prime, then j."""
    best = TRIVIAL_BOUND
    for prime in candidate_primes(f, budget_ms):
        for cand in delta_candidates(f, prime):
            if cand.bound > best.bound:
                best = cand
    return best


def irreducible_by_degree(f: Polynomial, delta: DegreeBound) -> bool:
    """Two factors of degree >= Δ need deg f >= 2Δ, so deg f < 2Δ forces irreducibility."""
    return f.degree < 2 * delta.bound


def degree_bound_holds(f: Polynomial, delta: DegreeBound) -> bool:
    """Re-derive ``delta`` from its stored witness."""
    if delta.is_trivial:
        return delta.bound == 1
    if delta.prime is None or delta.j is None:
        return False
    try:
        again = theorem5_bound(f, delta.prime, delta.j)
    except (HypothesisFailed, NotPrime, ZeroEndCoefficient):
        return False
    return again == delta
