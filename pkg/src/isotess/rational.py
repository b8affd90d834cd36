"""Exact rational arithmetic helpers with an explicit +infinity element.

All graph quantities (lengths, weights, perimeters, characteristic values)
are `fractions.Fraction` values.  Unbounded tile perimeters are represented
by ``INF`` (the float infinity), and every reciprocal taken through
:func:`reciprocal` obeys the convention 1/inf == 0 exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction

INF = float("inf")

# A finite Fraction or the INF sentinel.
Extended = Fraction | float


def is_inf(x: Extended) -> bool:
    return isinstance(x, float) and math.isinf(x)


def reciprocal(x: Extended) -> Fraction:
    """1/x as an exact Fraction; zero when x is infinite."""
    if is_inf(x):
        return Fraction(0)
    return Fraction(1) / x


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse "p/q", a decimal string like "0.25", or an integer."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text.strip())
    raise ValueError(f"not a rational: {text!r}")


def parse_extended(text: str | int) -> Extended:
    if isinstance(text, str) and text.strip().lower() in ("inf", "+inf", "infinity"):
        return INF
    return parse_rational(text)


def format_extended(x: Extended | None) -> str:
    """Serialize as "p/q" / "p", "inf", or "indeterminate" for None."""
    if x is None:
        return "indeterminate"
    if is_inf(x):
        return "inf"
    return str(x)
