"""Floating point comparison helpers."""

from __future__ import annotations

import math


def ulp_distance(a: float, b: float) -> float:
    """Distance between ``a`` and ``b`` in units of the larger operand's ulp."""
    if a == b:
        return 0.0
    return abs(a - b) / math.ulp(max(abs(a), abs(b)))


def within_ulps(a: float, b: float, n: int) -> bool:
    return ulp_distance(a, b) <= n


def rel_err(value: float, reference: float) -> float:
    if reference == 0.0:
        return abs(value)
    return abs(value - reference) / abs(reference)
