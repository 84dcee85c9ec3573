"""Feasible-set catalog with membership, projection and normal cones."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .extreal import INF, DomainError
from .intervals import IntervalBox

BOUND_TOL = 1e-9


def _pt(x, n):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (n,):
        raise ValueError(f"expected a point of dimension {n}, got shape {x.shape}")
    return x


class FeasibleSet:
    dim: int

    def contains(self, x, tol: float = 0.0) -> bool:
        return bool(self.mask(_pt(x, self.dim)[None, :], tol)[0])

    def mask(self, xs: np.ndarray, tol: float = 0.0) -> np.ndarray:
        raise NotImplementedError

    def indicator_many(self, xs, tol: float = 0.0) -> np.ndarray:
        return np.where(self.mask(np.asarray(xs, dtype=float), tol), 0.0, INF)

    def project(self, x) -> np.ndarray:
        raise NotImplementedError

    def normal_cone(self, x, tol: float = BOUND_TOL) -> IntervalBox:
        raise NotImplementedError

    def bounds(self):
        """Coordinate-wise hull ``(lower, upper)``, possibly infinite."""
        raise NotImplementedError

    def _check_member(self, x, tol):
        x = _pt(x, self.dim)
        if not self.contains(x, tol):
            raise DomainError(f"{x} is not in the set")
        return x


@dataclass(frozen=True)
class Box(FeasibleSet):
    lower: tuple
    upper: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lower))
        hi = tuple(float(v) for v in np.atleast_1d(self.upper))
        if len(lo) != len(hi):
            raise ValueError("lower/upper length mismatch")
        if any(a > b for a, b in zip(lo, hi)):
            raise ValueError("box with lower > upper")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self):
        return len(self.lower)

    def bounds(self):
        return np.array(self.lower), np.array(self.upper)

    def mask(self, xs, tol=0.0):
        lo, hi = self.bounds()
        return np.all((xs >= lo - tol) & (xs <= hi + tol), axis=1)

    def project(self, x):
        lo, hi = self.bounds()
        return np.clip(_pt(x, self.dim), lo, hi)

    def normal_cone(self, x, tol=BOUND_TOL):
        x = self._check_member(x, tol)
        lo, hi = self.bounds()
        at_lo = np.abs(x - lo) <= tol
        at_hi = np.abs(x - hi) <= tol
        cone_lo = np.where(at_lo, -INF, 0.0)
        cone_hi = np.where(at_hi, INF, 0.0)
        return IntervalBox(cone_lo, cone_hi)


def WholeSpace(n: int) -> Box:
    return Box((-INF,) * n, (INF,) * n)


def NonposOrthant(n: int) -> Box:
    return Box((-INF,) * n, (0.0,) * n)


def SingletonZero(n: int) -> Box:
    return Box((0.0,) * n, (0.0,) * n)


def PositiveRay(eps: float) -> Box:
    if eps <= 0:
        raise ValueError("positive ray needs eps > 0")
    return Box((float(eps),), (INF,))


@dataclass(frozen=True)
class FinitePointSet(FeasibleSet):
    points: tuple

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.size == 0:
            raise ValueError("finite point set must be nonempty")
        object.__setattr__(self, "points", tuple(tuple(float(v) for v in p) for p in pts))

    @property
    def array(self):
        return np.array(self.points)

    @property
    def dim(self):
        return len(self.points[0])

    def bounds(self):
        a = self.array
        return a.min(axis=0), a.max(axis=0)

    def mask(self, xs, tol=0.0):
        d = np.abs(xs[:, None, :] - self.array[None, :, :]).max(axis=2)
        return np.any(d <= tol, axis=1)

    def project(self, x):
        x = _pt(x, self.dim)
        d = np.linalg.norm(self.array - x, axis=1)
        return self.array[int(np.argmin(d))].copy()  # argmin picks the lowest index on ties

    def normal_cone(self, x, tol=BOUND_TOL):
        self._check_member(x, tol)
        return IntervalBox.whole(self.dim)


def contains(X: FeasibleSet, x, tol: float = 0.0) -> bool:
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return X.contains(x, tol)


def project(X: FeasibleSet, x) -> np.ndarray:
    return X.project(x)


def normal_cone(X: FeasibleSet, x, tol: float = BOUND_TOL) -> IntervalBox:
    return X.normal_cone(x, tol)


def kind_of(X: FeasibleSet) -> str:
    if isinstance(X, FinitePointSet):
        return "points"
    lo, hi = X.bounds()
    if np.all(lo == -INF) and np.all(hi == INF):
        return "whole"
    if np.all(lo == -INF) and np.all(hi == 0):
        return "nonpos"
    if np.all(lo == 0) and np.all(hi == 0):
        return "zero"
    if X.dim == 1 and lo[0] > 0 and hi[0] == INF:
        return "rplus"
    return "box"


def format_set(X: FeasibleSet) -> str:
    kind = kind_of(X)
    if kind == "points":
        return "points " + " ; ".join(",".join(repr(v) for v in p) for p in X.points)
    if kind in ("whole", "nonpos", "zero"):
        return f"{kind} {X.dim}"
    if kind == "rplus":
        return f"rplus {X.lower[0]!r}"
    return "box " + " ".join(f"{a!r} {b!r}" for a, b in zip(X.lower, X.upper))


def parse_set(text: str) -> FeasibleSet:
    tokens = text.split()
    kind, args = tokens[0], tokens[1:]
    if kind == "whole":
        return WholeSpace(int(args[0]))
    if kind == "nonpos":
        return NonposOrthant(int(args[0]))
    if kind == "zero":
        return SingletonZero(int(args[0]))
    if kind == "rplus":
        return PositiveRay(float(args[0]))
    if kind == "box":
        vals = [float(a) for a in args]
        if len(vals) % 2:
            raise ValueError("box needs pairs l_i u_i")
        return Box(tuple(vals[0::2]), tuple(vals[1::2]))
    if kind == "points":
        pts = [[float(v) for v in chunk.split(",")] for chunk in " ".join(args).split(";")]
        return FinitePointSet(tuple(map(tuple, pts)))
    raise ValueError(f"unknown set variant {kind!r}")
