"""Coordinate boxes used for subdifferentials and normal cones.

Every monitoring function and feasible set in the catalog is separable (or a
simplex over active coordinates), so a box ``[lo, hi]`` per coordinate,
optionally cut by a single ``sum(y) == total`` hyperplane, describes the sets
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

INF = np.inf


@dataclass(frozen=True)
class IntervalBox:
    lo: np.ndarray
    hi: np.ndarray
    total: Optional[float] = None
    empty: bool = False

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lo, dtype=float))
        hi = np.atleast_1d(np.asarray(self.hi, dtype=float))
        if lo.shape != hi.shape:
            raise ValueError("lo/hi shape mismatch")
        if not self.empty and np.any(lo > hi):
            raise ValueError("interval with lo > hi")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, v) -> "IntervalBox":
        v = np.atleast_1d(np.asarray(v, dtype=float))
        return cls(v.copy(), v.copy())

    @classmethod
    def zero(cls, n: int) -> "IntervalBox":
        return cls(np.zeros(n), np.zeros(n))

    @classmethod
    def whole(cls, n: int) -> "IntervalBox":
        return cls(np.full(n, -INF), np.full(n, INF))

    @classmethod
    def nothing(cls, n: int) -> "IntervalBox":
        return cls(np.zeros(n), np.zeros(n), empty=True)

    @property
    def dim(self) -> int:
        return self.lo.size

    def is_whole(self) -> bool:
        return (not self.empty and self.total is None
                and bool(np.all(self.lo == -INF) and np.all(self.hi == INF)))

    def is_zero(self) -> bool:
        return not self.empty and bool(np.all(self.lo == 0) and np.all(self.hi == 0))

    def contains(self, v, tol: float = 0.0) -> bool:
        if self.empty:
            return False
        v = np.atleast_1d(np.asarray(v, dtype=float))
        if v.shape != self.lo.shape:
            raise ValueError(f"dimension mismatch: {v.shape} vs {self.lo.shape}")
        ok = bool(np.all(v >= self.lo - tol) and np.all(v <= self.hi + tol))
        if ok and self.total is not None:
            ok = abs(float(v.sum()) - self.total) <= tol * max(1, v.size)
        return ok

    def shift(self, g) -> "IntervalBox":
        """Minkowski sum with a single vector (sum rule with a smooth term)."""
        g = np.atleast_1d(np.asarray(g, dtype=float))
        total = None if self.total is None else self.total + float(g.sum())
        return IntervalBox(self.lo + g, self.hi + g, total=total, empty=self.empty)

    def concat(self, other: "IntervalBox") -> "IntervalBox":
        if self.total is not None or other.total is not None:
            raise ValueError("cannot concatenate boxes carrying a sum constraint")
        return IntervalBox(np.concatenate([self.lo, other.lo]),
                           np.concatenate([self.hi, other.hi]),
                           empty=self.empty or other.empty)

    def clamp(self, v) -> np.ndarray:
        return np.clip(np.asarray(v, dtype=float), self.lo, self.hi)

    def min_norm_element(self) -> np.ndarray:
        """Least-norm member; used to pick a representative subgradient."""
        if self.empty:
            raise ValueError("empty set has no elements")
        if self.total is None:
            return self.clamp(np.zeros(self.dim))
        return _project_capped_simplex(np.zeros(self.dim), self.lo, self.hi, self.total)

    def tags(self) -> list:
        """Per-coordinate cone tags: 'zero', 'nonneg', 'nonpos', 'all' or 'interval'."""
        out = []
        for a, b in zip(self.lo, self.hi):
            if a == 0 and b == 0:
                out.append("zero")
            elif a == 0 and b == INF:
                out.append("nonneg")
            elif a == -INF and b == 0:
                out.append("nonpos")
            elif a == -INF and b == INF:
                out.append("all")
            else:
                out.append("interval")
        return out

    def __str__(self) -> str:
        if self.empty:
            return "EMPTY"
        parts = [f"[{a:g}, {b:g}]" for a, b in zip(self.lo, self.hi)]
        s = " x ".join(parts)
        if self.total is not None:
            s += f" with sum = {self.total:g}"
        return s


def _project_capped_simplex(v, lo, hi, total, iters: int = 200):
    # bisection on the shift lambda: sum(clip(v - lambda, lo, hi)) == total
    a, b = float(np.min(v - hi)) - 1.0, float(np.max(v - lo)) + 1.0
    for _ in range(iters):
        mid = 0.5 * (a + b)
        if np.clip(v - mid, lo, hi).sum() > total:
            a = mid
        else:
            b = mid
    return np.clip(v - 0.5 * (a + b), lo, hi)
