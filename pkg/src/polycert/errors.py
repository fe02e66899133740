from __future__ import annotations
from typing import Optional


class PolycertError(Exception):
    """Base class for every error raised by the package."""


class ZeroPolynomial(PolycertError, ValueError):
    pass


class DegreeTooLow(PolycertError, ValueError):
    pass


class ZeroConstantTerm(PolycertError, ValueError):
    pass


class ZeroEndCoefficient(PolycertError, ValueError):
    pass


class ZeroArgument(PolycertError, ValueError):
    pass


class NoPrimeDivisor(PolycertError, ValueError):
    pass


class NotPrime(PolycertError, ValueError):
    pass


class DegenerateSegment(PolycertError, ValueError):
    pass


class WitnessIsRoot(PolycertError, ValueError):
    pass


class NotPrimitive(PolycertError, ValueError):
    pass


class EmptyWitnessRange(PolycertError, ValueError):
    pass


class Malformed(PolycertError, ValueError):
    """Certificate text or object does not match the schema."""


class OracleScaleExceeded(PolycertError, ValueError):
    pass


class PolySyntaxError(PolycertError, ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class BudgetExceeded(PolycertError, RuntimeError):
    pass


class OracleBudgetExceeded(PolycertError, RuntimeError):
    pass


class HypothesisFailed(PolycertError):
    """A Newton-polygon hypothesis does not hold; ``index`` is the failing coefficient."""

    def __init__(self, condition: str, index: Optional[int] = None):
        where = "" if index is None else f" (i={index})"
        super().__init__(f"{condition}{where}")
        self.condition = condition
        self.index = index
