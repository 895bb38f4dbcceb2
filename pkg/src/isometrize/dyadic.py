"""Exact extended dyadic values.

Distances are :class:`fractions.Fraction` instances whose denominators are
powers of two, or :data:`INF`.  ``Fraction + INF`` already evaluates to
``INF`` and comparisons between the two behave, so no wrapper type is needed.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Union

INF = math.inf

Value = Union[Fraction, float]

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)

_P2K = re.compile(r"^\s*(-?\d+)\s*/\s*2\s*\^\s*(\d+)\s*$")
_PQ = re.compile(r"^\s*(-?\d+)\s*/\s*(\d+)\s*$")
_INT = re.compile(r"^\s*(-?\d+)\s*$")


def is_dyadic(v) -> bool:
    if v == INF:
        return True
    if not isinstance(v, (int, Fraction)):
        return False
    d = Fraction(v).denominator
    return d & (d - 1) == 0


def pow2(k: int) -> Fraction:
    """``2**k`` as an exact fraction (``k`` may be negative)."""
    return Fraction(2) ** k


def to_value(v) -> Value:
    """Coerce ints, fractions, ``inf`` and value strings to a dyadic value."""
    if isinstance(v, str):
        return parse_value(v)
    if isinstance(v, float):
        if v == INF:
            return INF
        raise ValueError(f"floats are not accepted as exact values: {v!r}")
    v = Fraction(v)
    if not is_dyadic(v):
        raise ValueError(f"{v} is not a dyadic rational")
    return v


def parse_value(s: str) -> Value:
    """Parse ``"inf"``, ``"0"``, ``"5"``, ``"3/8"`` or ``"3/2^3"``."""
    t = s.strip().lower()
    if t in ("inf", "+inf", "infinity"):
        return INF
    m = _P2K.match(t)
    if m:
        return Fraction(int(m.group(1)), 2 ** int(m.group(2)))
    m = _PQ.match(t)
    if m:
        q = int(m.group(2))
        if q <= 0 or q & (q - 1):
            raise ValueError(f"denominator of {s!r} is not a power of two")
        return Fraction(int(m.group(1)), q)
    m = _INT.match(t)
    if m:
        return Fraction(int(m.group(1)))
    raise ValueError(f"cannot parse exact value {s!r}")


def format_value(v: Value) -> str:
    """Render as ``"inf"``, ``"0"`` or the canonical ``"p/2^k"``."""
    if v == INF:
        return "inf"
    v = Fraction(v)
    if v == 0:
        return "0"
    k = v.denominator.bit_length() - 1
    return f"{v.numerator}/2^{k}"
