from __future__ import annotations

from .certify import analyze, verify_certificate
from .cli import main
from .parsing import parse_poly
from .poly import Polynomial

__all__ = ["Polynomial", "analyze", "main", "parse_poly", "verify_certificate"]
