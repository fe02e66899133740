"""Polynomial text: ``64+56z^2+14z^4+z^6`` style input and the canonical printer.

Grammar (whitespace ignored)::

    poly := ['-'] term (('+'|'-') term)*
    term := nat | nat ['*'] var | var
    var  := ('z'|'x') ['^' nat]

Repeated powers accumulate.
"""
from __future__ import annotations
from typing import Dict, List, Tuple

from .errors import PolySyntaxError
from .poly import Polynomial

VARIABLES = ("z", "x")


def _tokens(text: str) -> List[Tuple[str, int]]:
    """Non-whitespace characters with their offsets."""
    return [(ch, i) for i, ch in enumerate(text) if not ch.isspace()]


class _Cursor:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.pos = 0
        self.end = len(text)

    def peek(self) -> str:
        return self.toks[self.pos][0] if self.pos < len(self.toks) else ""

    def offset(self) -> int:
        return self.toks[self.pos][1] if self.pos < len(self.toks) else self.end

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def nat(self) -> int:
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if start == self.pos:
            raise PolySyntaxError("expected a number", self.offset())
        return int("".join(ch for ch, _ in self.toks[start:self.pos]))


def _term(cur: _Cursor) -> Tuple[int, int]:
    coeff, power = 1, 0
    has_nat = cur.peek().isdigit()
    if has_nat:
        coeff = cur.nat()
        if cur.peek() == "*":
            cur.take()
            if cur.peek() not in VARIABLES:
                raise PolySyntaxError("expected a variable after '*'", cur.offset())
    if cur.peek() in VARIABLES:
        cur.take()
        power = 1
        if cur.peek() == "^":
            cur.take()
            power = cur.nat()
    elif not has_nat:
        raise PolySyntaxError("expected a term", cur.offset())
    return coeff, power


def parse_poly(text: str) -> Polynomial:
    cur = _Cursor(text)
    if not cur.toks:
        raise PolySyntaxError("empty polynomial", 0)
    acc: Dict[int, int] = {}
    sign = 1
    if cur.peek() == "-":
        cur.take()
        sign = -1
    while True:
        coeff, power = _term(cur)
        acc[power] = acc.get(power, 0) + sign * coeff
        op = cur.peek()
        if op == "":
            break
        if op not in "+-":
            raise PolySyntaxError(f"unexpected {op!r}", cur.offset())
        cur.take()
        sign = 1 if op == "+" else -1
    top = max(acc)
    return Polynomial(tuple(acc.get(i, 0) for i in range(top + 1)))


def parse_coeffs(csv: str) -> Polynomial:
    """Comma-separated a_0, ..., a_n."""
    out = []
    offset = 0
    for part in csv.split(","):
        item = part.strip()
        try:
            out.append(int(item))
        except ValueError:
            raise PolySyntaxError(f"bad coefficient {item!r}", offset) from None
        offset += len(part) + 1
    return Polynomial(tuple(out))


def format_poly(p: Polynomial, var: str = "z") -> str:
    """Ascending-power text that :func:`parse_poly` reads back to ``p``."""
    if p.is_zero:
        return "0"
    parts: List[str] = []
    for i, a in enumerate(p.coeffs):
        if a == 0:
            continue
        mag = abs(a)
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{mag}{mono}"
        if not parts:
            parts.append(("-" if a < 0 else "") + body)
        else:
            parts.append(("-" if a < 0 else "+") + body)
    return "".join(parts)
