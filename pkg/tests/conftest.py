from __future__ import annotations
import random
from dataclasses import replace

import pytest

from polycert import config
from polycert.config import seed_from_env, update_params
from polycert.criteria import PrimeWitness
from polycert.parsing import parse_poly

POLYS = {
    "three_quadratics": "64+56z^2+14z^4+z^6",
    "leading_quartic": "81+1782z^2+9797z^4",
    "pk_quartic": "-2-4z+3z^2-2z^3+2z^4",
    "cubic_square": "9-36z+54z^2-2094z^3+4125z^4-2058z^5+117649z^6",
    "F1": "1287+3168z^2-3528z^3+1936z^4-4312z^5+2401z^6",
    "F2": "4+120z^2+899z^4",
    "F3": "4-16z+32z^2+4z^3-56z^4+72z^5+81z^6",
    "F4": "2-2z+2z^2-375z^3+100z^4-100z^5+100z^6-18750z^7",
    "reversal_sextic": "-3+3z+343z^2-126z^4+126z^5+14406z^6",
    "dominant_sextic": "20449-3146z+121z^2+13442z^3-1034z^4+2209z^6",
    "unit_circle": "128+120z^2-113z^4-105z^6",
    "cyclotomic": "1+z+z^2",
}


@pytest.fixture(autouse=True)
def pinned_params():
    saved = config.PARAMS
    update_params(seed=seed_from_env())
    yield
    config.PARAMS = saved


@pytest.fixture
def rng():
    return random.Random(seed_from_env())


@pytest.fixture(scope="session")
def polys():
    return {name: parse_poly(text) for name, text in POLYS.items()}


def _mutations(cert):
    """Single-field edits of a certificate, each labelled."""
    out = []
    if cert.m is not None:
        out += [("m+1", replace(cert, m=cert.m + 1)), ("m-1", replace(cert, m=cert.m - 1))]
    for i, w in enumerate(cert.primes):
        def with_prime(new, i=i):
            primes = list(cert.primes)
            primes[i] = new
            return replace(cert, primes=tuple(primes))
        out.append((f"j{i}+1", with_prime(PrimeWitness(w.p, w.k, w.j + 1))))
        if w.j > 0:
            out.append((f"j{i}-1", with_prime(PrimeWitness(w.p, w.k, w.j - 1))))
        out.append((f"k{i}+1", with_prime(PrimeWitness(w.p, w.k + 1, w.j))))
        out.append((f"k{i}-1", with_prime(PrimeWitness(w.p, w.k - 1, w.j))))
    out.append(("bound-1", replace(cert, bound=cert.bound - 1)))
    if len(cert.primes) >= 2:
        swapped = (cert.primes[1], cert.primes[0]) + cert.primes[2:]
        out.append(("swap", replace(cert, primes=swapped)))
    elif len(cert.primes) == 1 and cert.q is not None and cert.q != cert.primes[0].p:
        w = cert.primes[0]
        out.append(("swap", replace(cert, primes=(PrimeWitness(cert.q, w.k, w.j),), q=w.p)))
    return out


@pytest.fixture(scope="session")
def mutations():
    return _mutations
