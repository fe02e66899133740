from fractions import Fraction
from math import gcd

import pytest

from polycert.errors import DegenerateSegment, HypothesisFailed, NotPrime, ZeroEndCoefficient
from polycert.newton import (
    DegreeBound,
    TRIVIAL_BOUND,
    ValuationPoint,
    best_delta,
    candidate_primes,
    degree_bound_holds,
    delta_candidates,
    irreducible_by_degree,
    lattice_count,
    lower_hull,
    newton_polygon,
    theorem5_bound,
    valuation_points,
)
from polycert.poly import Polynomial


def _pts(*pairs):
    return [ValuationPoint(x, y) for x, y in pairs]


def _mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


def test_valuation_points(polys):
    assert valuation_points(polys["pk_quartic"], 2) == _pts((0, 1), (1, 2), (2, 0), (3, 1), (4, 1))
    assert valuation_points(polys["F3"], 2) == _pts((0, 2), (1, 4), (2, 5), (3, 2), (4, 3), (5, 3), (6, 0))
    assert valuation_points(Polynomial.of(1, 0, 1), 3) == _pts((0, 0), (2, 0))


def test_valuation_points_rejects_bad_input():
    with pytest.raises(ZeroEndCoefficient):
        valuation_points(Polynomial.of(0, 1, 1), 2)
    with pytest.raises(NotPrime):
        valuation_points(Polynomial.of(1, 1), 6)


def test_lower_hull(polys):
    hull = lower_hull(valuation_points(polys["pk_quartic"], 2))
    assert hull.vertices == tuple(_pts((0, 1), (2, 0), (4, 1)))
    assert newton_polygon(polys["F3"], 2).vertices == tuple(_pts((0, 2), (6, 0)))
    assert lower_hull(_pts((0, 3), (5, 1))).vertices == tuple(_pts((0, 3), (5, 1)))


def test_edges(polys):
    poly = newton_polygon(polys["pk_quartic"], 2)
    assert poly.segment_count == 2
    first, second = poly.edges
    assert first.width == 2 and first.slope == Fraction(-1, 2)
    assert second.slope == Fraction(1, 2)
    (edge,) = newton_polygon(polys["F3"], 2).edges
    assert edge.lattice_points() == _pts((0, 2), (3, 1), (6, 0))


def test_lattice_count():
    assert lattice_count(ValuationPoint(0, 2), ValuationPoint(6, 0)) == 3
    assert lattice_count(ValuationPoint(0, 0), ValuationPoint(1, 1)) == 2
    assert lattice_count(ValuationPoint(0, 1), ValuationPoint(2, 0)) == 2
    with pytest.raises(DegenerateSegment):
        lattice_count(ValuationPoint(1, 1), ValuationPoint(1, 1))


def _enumerated(a, b):
    lo, hi = sorted((a, b))
    count = 0
    for x in range(lo.x, hi.x + 1):
        for y in range(min(lo.y, hi.y), max(lo.y, hi.y) + 1):
            on_line = (x - a.x) * (b.y - a.y) == (y - a.y) * (b.x - a.x)
            if on_line:
                count += 1
    return count


def test_lattice_count_matches_enumeration(rng):
    origin = ValuationPoint(0, 0)
    segments = [(origin, ValuationPoint(x, y)) for x in range(51) for y in range(0, 51, 7) if (x, y) != (0, 0)]
    for _ in range(300):
        a = ValuationPoint(rng.randint(0, 50), rng.randint(0, 50))
        b = ValuationPoint(rng.randint(0, 50), rng.randint(0, 50))
        if a != b:
            segments.append((a, b))
    for a, b in segments:
        assert lattice_count(a, b) == _enumerated(a, b)


def test_hull_is_convex_and_below_points(rng):
    for _ in range(100):
        n = rng.randint(1, 12)
        xs = sorted({0, n} | {rng.randint(0, n) for _ in range(n)})
        points = [ValuationPoint(x, rng.randint(0, 9)) for x in xs]
        hull = lower_hull(points)
        verts = hull.vertices
        assert verts[0].x == 0 and verts[-1].x == n
        slopes = [e.slope for e in hull.edges]
        assert all(s < t for s, t in zip(slopes, slopes[1:]))
        for p in points:
            edge = next(e for e in hull.edges if e.start.x <= p.x <= e.end.x)
            # on or above the supporting line
            assert (p.y - edge.start.y) * edge.width >= (edge.end.y - edge.start.y) * (p.x - edge.start.x)


def test_theorem5_bound_worked_examples(polys):
    f3 = theorem5_bound(polys["F3"], 2, 6)
    assert (f3.bound, f3.d1, f3.d2) == (3, 2, None)
    f4 = theorem5_bound(polys["F4"], 2, 3)
    assert (f4.bound, f4.d1, f4.d2) == (3, 1, 1)
    rev = theorem5_bound(polys["reversal_sextic"], 3, 2)
    assert (rev.bound, rev.d1, rev.d2) == (2, 1, 1)


def test_theorem5_bound_failures(polys):
    with pytest.raises(HypothesisFailed) as exc:
        theorem5_bound(polys["pk_quartic"], 2, 1)
    assert exc.value.condition == "unit_coefficient"
    assert exc.value.index == 1
    with pytest.raises(HypothesisFailed) as exc:
        theorem5_bound(polys["pk_quartic"], 2, 0)
    assert exc.value.condition == "j_out_of_range"
    with pytest.raises(HypothesisFailed) as exc:
        theorem5_bound(Polynomial.of(4, 1, 1), 2, 2)
    assert exc.value.condition == "left_slope"
    assert exc.value.index == 1


@pytest.mark.parametrize("name,bound,witness", [
    ("pk_quartic", 2, (2, 2, 1, 1)),
    ("cubic_square", 3, (3, 6, 2, None)),
    ("F3", 3, (2, 6, 2, None)),
    ("F4", 3, (2, 3, 1, 1)),
    ("reversal_sextic", 2, (3, 2, 1, 1)),
    ("dominant_sextic", 3, (11, 6, 2, None)),
])
def test_best_delta(polys, name, bound, witness):
    delta = best_delta(polys[name])
    assert delta.bound == bound
    assert (delta.prime, delta.j, delta.d1, delta.d2) == witness
    assert theorem5_bound(polys[name], delta.prime, delta.j) == delta
    assert degree_bound_holds(polys[name], delta)


def test_best_delta_trivial(polys):
    assert best_delta(polys["cyclotomic"]) == TRIVIAL_BOUND
    assert candidate_primes(polys["cyclotomic"]) == []


def test_delta_candidates(polys):
    cands = delta_candidates(polys["pk_quartic"], 2)
    assert [(c.j, c.bound) for c in cands] == [(2, 2)]


def test_irreducible_by_degree():
    assert not irreducible_by_degree(Polynomial((1,) * 7), DegreeBound(3, 2, 6, 2, source="T5"))
    assert not irreducible_by_degree(Polynomial((1,) * 8), DegreeBound(3, 2, 6, 2, source="T5"))
    assert irreducible_by_degree(Polynomial.of(1, 1), TRIVIAL_BOUND)
    assert irreducible_by_degree(Polynomial((1,) * 6), DegreeBound(3, 2, 6, 2, source="T5"))


def test_degree_bound_holds_rejects_tampering(polys):
    delta = best_delta(polys["F3"])
    assert not degree_bound_holds(polys["F3"], DegreeBound(4, 2, 6, 2, source="T5"))
    assert not degree_bound_holds(polys["F3"], DegreeBound(3, 3, 6, 2, source="T5"))
    assert degree_bound_holds(polys["F3"], delta)


def test_factor_degrees_respect_floor(rng):
    checked = 0
    while checked < 60:
        g = tuple(rng.randint(-10, 10) for _ in range(rng.randint(2, 4)))
        h = tuple(rng.randint(-10, 10) for _ in range(rng.randint(2, 4)))
        if 0 in (g[0], g[-1], h[0], h[-1]):
            continue
        f = Polynomial(_mul(g, h))
        floor = min(len(g), len(h)) - 1
        for p in candidate_primes(f):
            for cand in delta_candidates(f, p):
                assert cand.bound <= floor
        checked += 1
