"""Dense integer polynomials: content, height, evaluation, Taylor shift, reversal.

Everything here is exact; heights are :class:`fractions.Fraction` values and no
floating point is used.
"""
from __future__ import annotations
import hashlib
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Tuple

from .errors import DegreeTooLow, ZeroConstantTerm, ZeroPolynomial

Rational = Fraction


def _strip(coeffs: Iterable[int]) -> Tuple[int, ...]:
    out = [int(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class Polynomial:
    """a_0 + a_1 z + ... + a_n z^n; ``coeffs[i]`` is a_i, trailing zeros stripped."""
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(self.coeffs))

    @classmethod
    def of(cls, *coeffs: int) -> "Polynomial":
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        if self.is_zero:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def constant(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def fingerprint(self) -> str:
        """Short stable hash of the coefficient vector."""
        text = ",".join(str(c) for c in self.coeffs)
        return hashlib.sha256(text.encode("ascii")).hexdigest()[:16]


@dataclass(frozen=True)
class ShiftedCoefficients:
    """s_i(m) = f^(i)(m)/i!, i.e. the coefficients of f(m + z)."""
    base: Polynomial
    m: int
    s: Tuple[int, ...]

    def __getitem__(self, i: int) -> int:
        return self.s[i]

    def as_polynomial(self) -> Polynomial:
        return Polynomial(self.s)


def _require_nonzero(p: Polynomial) -> None:
    if p.is_zero:
        raise ZeroPolynomial("operation undefined for the zero polynomial")


def content(p: Polynomial) -> int:
    _require_nonzero(p)
    return reduce(gcd, (abs(c) for c in p.coeffs), 0)


def primitive_part(p: Polynomial) -> Tuple[int, Polynomial]:
    """Split p into (content, primitive part); the sign stays with the primitive part."""
    c = content(p)
    if c == 1:
        return 1, p
    return c, Polynomial(tuple(a // c for a in p.coeffs))


def height(p: Polynomial) -> Rational:
    """h_f = max_{i<n} |a_i| / |a_n| as an exact fraction."""
    if p.degree < 1:
        raise DegreeTooLow("height needs degree >= 1")
    top = max(abs(a) for a in p.coeffs[:-1])
    return Fraction(top, abs(p.leading))


def evaluate(p: Polynomial, m: int) -> int:
    acc = 0
    for a in reversed(p.coeffs):
        acc = acc * m + a
    return acc


def taylor_shift(p: Polynomial, m: int) -> ShiftedCoefficients:
    """Coefficients of p(m + z) by n-fold synthetic division by (z - m)."""
    _require_nonzero(p)
    work = list(p.coeffs)
    n = len(work) - 1
    # After pass i, work[i] holds the i-th remainder, which is s_i(m).
    for i in range(n):
        for k in range(n - 1, i - 1, -1):
            work[k] += m * work[k + 1]
    return ShiftedCoefficients(base=p, m=m, s=tuple(work))


def reverse(p: Polynomial) -> Polynomial:
    """z^n p(1/z); degree-preserving only when a_0 != 0."""
    _require_nonzero(p)
    if p.constant == 0:
        raise ZeroConstantTerm("reversal would drop the degree")
    return Polynomial(tuple(reversed(p.coeffs)))


def hull_bound(p: Polynomial) -> Tuple[int, int]:
    """(H, |a_n|) with H = max_{i<n} |a_i|, the integer form of h_f = H/|a_n|."""
    if p.degree < 1:
        raise DegreeTooLow("height needs degree >= 1")
    return max(abs(a) for a in p.coeffs[:-1]), abs(p.leading)
