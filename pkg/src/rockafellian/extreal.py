"""Extended-real arithmetic under minimization conventions.

Extended reals are plain Python floats restricted to ``[-inf, inf]``; NaN is
rejected.  Addition follows ``a + inf = inf`` for every ``a`` (including
``-inf``), so objective sums stay total.
"""

from __future__ import annotations

import math

INF = math.inf
NINF = -math.inf


class DomainError(ValueError):
    """Point lies outside the domain where an operation is defined."""


def check(a: float) -> float:
    a = float(a)
    if math.isnan(a):
        raise ValueError("extended real cannot be NaN")
    return a


def ext_add(a: float, b: float) -> float:
    a, b = check(a), check(b)
    if a == INF or b == INF:
        return INF
    if a == NINF or b == NINF:
        return NINF
    return a + b


def ext_sum(*values: float) -> float:
    total = 0.0
    for v in values:
        total = ext_add(total, v)
    return total


def ext_scale(t: float, a: float) -> float:
    """Nonnegative scaling with ``0 * (+-inf) = 0``."""
    if t < 0:
        raise ValueError(f"scale factor must be nonnegative, got {t}")
    a = check(a)
    if t == 0:
        return 0.0
    return t * a


def ext_neg(a: float) -> float:
    return -check(a)


def fmt(a: float) -> str:
    a = check(a)
    if a == INF:
        return "inf"
    if a == NINF:
        return "-inf"
    return repr(a)


def parse(text: str) -> float:
    return check(float(text.strip()))
