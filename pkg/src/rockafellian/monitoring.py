"""Catalog of convex monitoring functions ``h: R^m -> (-inf, inf]``.

Each variant evaluates, returns its subdifferential and the normal cone of its
domain as an :class:`~rockafellian.intervals.IntervalBox`, and has a closed-form
convex conjugate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .extreal import INF, DomainError
from .intervals import IntervalBox

ACTIVE_TOL = 1e-9


def _vec(z, m: int) -> np.ndarray:
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if z.shape != (m,):
        raise ValueError(f"expected a point of dimension {m}, got shape {z.shape}")
    return z


class MonitoringFn:
    """Base class; subclasses are frozen dataclasses."""

    dim: int
    real_valued = True

    def eval(self, z, tol: float = 0.0) -> float:
        return float(self.eval_many(_vec(z, self.dim)[None, :], tol)[0])

    def eval_many(self, Z: np.ndarray, tol: float = 0.0) -> np.ndarray:
        raise NotImplementedError

    def subdiff(self, z, tol: float = ACTIVE_TOL) -> IntervalBox:
        raise NotImplementedError

    def conjugate(self, y) -> float:
        raise NotImplementedError

    def domain_normal(self, z, tol: float = ACTIVE_TOL) -> IntervalBox:
        z = _vec(z, self.dim)
        if not np.isfinite(self.eval(z, tol)):
            raise DomainError(f"{z} outside dom h")
        return IntervalBox.zero(self.dim)

    def conjugate_domain(self) -> IntervalBox:
        """Box containing ``dom h*`` (exact for every variant but MaxCoord)."""
        raise NotImplementedError

    def conjugate_subgradient(self, y) -> np.ndarray:
        """One element of the subdifferential of ``h*`` at ``y`` (in ``dom h*``)."""
        raise NotImplementedError

    def subgradient(self, z, tol: float = ACTIVE_TOL) -> np.ndarray:
        return self.subdiff(z, tol).min_norm_element()

    def _require_dom(self, z, tol):
        z = _vec(z, self.dim)
        if not np.isfinite(self.eval(z, tol)):
            raise DomainError(f"{z} outside dom h")
        return z


@dataclass(frozen=True)
class IndicatorZero(MonitoringFn):
    """Indicator of ``{0}^m`` (equality constraints)."""

    dim: int
    real_valued = False

    def eval_many(self, Z, tol=0.0):
        Z = np.asarray(Z, dtype=float)
        ok = np.all(np.abs(Z) <= tol, axis=1)
        return np.where(ok, 0.0, INF)

    def subdiff(self, z, tol=ACTIVE_TOL):
        self._require_dom(z, tol)
        return IntervalBox.whole(self.dim)

    def conjugate(self, y):
        _vec(y, self.dim)
        return 0.0

    def domain_normal(self, z, tol=ACTIVE_TOL):
        self._require_dom(z, tol)
        return IntervalBox.whole(self.dim)

    def conjugate_domain(self):
        return IntervalBox.whole(self.dim)

    def conjugate_subgradient(self, y):
        return np.zeros(self.dim)


@dataclass(frozen=True)
class IndicatorNonpos(MonitoringFn):
    """Indicator of ``(-inf, 0]^q`` (inequality constraints)."""

    dim: int
    real_valued = False

    def eval_many(self, Z, tol=0.0):
        Z = np.asarray(Z, dtype=float)
        return np.where(np.all(Z <= tol, axis=1), 0.0, INF)

    def subdiff(self, z, tol=ACTIVE_TOL):
        z = self._require_dom(z, tol)
        hi = np.where(np.abs(z) <= tol, INF, 0.0)
        return IntervalBox(np.zeros(self.dim), hi)

    def conjugate(self, y):
        y = _vec(y, self.dim)
        return 0.0 if np.all(y >= 0) else INF

    def domain_normal(self, z, tol=ACTIVE_TOL):
        return self.subdiff(z, tol)

    def conjugate_domain(self):
        return IntervalBox(np.zeros(self.dim), np.full(self.dim, INF))

    def conjugate_subgradient(self, y):
        return np.zeros(self.dim)


@dataclass(frozen=True)
class GoalPenalty(MonitoringFn):
    """``z -> sum_i theta_i * max(0, z_i - tau_i)``."""

    theta: tuple
    tau: tuple

    def __post_init__(self):
        th = tuple(float(t) for t in np.atleast_1d(self.theta))
        ta = tuple(float(t) for t in np.atleast_1d(self.tau))
        if len(th) != len(ta):
            raise ValueError("theta and tau must have equal length")
        if any(t < 0 for t in th):
            raise ValueError("goal weights must be nonnegative")
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "tau", ta)

    @property
    def dim(self):
        return len(self.theta)

    def eval_many(self, Z, tol=0.0):
        Z = np.asarray(Z, dtype=float)
        return np.maximum(0.0, Z - np.array(self.tau)) @ np.array(self.theta)

    def subdiff(self, z, tol=ACTIVE_TOL):
        z = _vec(z, self.dim)
        th, ta = np.array(self.theta), np.array(self.tau)
        at = np.abs(z - ta) <= tol
        lo = np.where(z > ta, th, 0.0)
        hi = np.where(z < ta, 0.0, th)
        lo = np.where(at, 0.0, lo)
        hi = np.where(at, th, hi)
        return IntervalBox(lo, hi)

    def conjugate(self, y):
        y = _vec(y, self.dim)
        th = np.array(self.theta)
        if np.any(y < 0) or np.any(y > th):
            return INF
        return float(np.dot(self.tau, y))

    def conjugate_domain(self):
        return IntervalBox(np.zeros(self.dim), np.array(self.theta))

    def conjugate_subgradient(self, y):
        return np.array(self.tau)


@dataclass(frozen=True)
class WeightedSum(MonitoringFn):
    """``z -> <p, z>``; expectation over scenarios when ``p`` is a distribution."""

    p: tuple

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(float(v) for v in np.atleast_1d(self.p)))

    @property
    def dim(self):
        return len(self.p)

    def eval_many(self, Z, tol=0.0):
        return np.asarray(Z, dtype=float) @ np.array(self.p)

    def subdiff(self, z, tol=ACTIVE_TOL):
        _vec(z, self.dim)
        return IntervalBox.point(self.p)

    def conjugate(self, y, tol: float = 1e-12):
        y = _vec(y, self.dim)
        return 0.0 if np.all(np.abs(y - np.array(self.p)) <= tol) else INF

    def conjugate_domain(self):
        return IntervalBox.point(self.p)

    def conjugate_subgradient(self, y):
        return np.zeros(self.dim)


@dataclass(frozen=True)
class PwaMax(MonitoringFn):
    """Per coordinate ``max_i (alpha_i * z + beta_i)``, summed over ``dim`` coordinates.

    ``pieces`` holds ``(alpha, beta)`` pairs; they are stored sorted by slope.
    """

    pieces: tuple
    dim: int = 1

    def __post_init__(self):
        ps = sorted((float(a), float(b)) for a, b in self.pieces)
        if not ps:
            raise ValueError("PwaMax needs at least one piece")
        slopes = [a for a, _ in ps]
        if len(set(slopes)) != len(slopes):
            raise ValueError("PwaMax pieces must have distinct slopes")
        object.__setattr__(self, "pieces", tuple(ps))

    @property
    def alphas(self):
        return np.array([a for a, _ in self.pieces])

    @property
    def betas(self):
        return np.array([b for _, b in self.pieces])

    def eval_many(self, Z, tol=0.0):
        Z = np.asarray(Z, dtype=float)
        vals = Z[..., None] * self.alphas + self.betas
        return vals.max(axis=-1).sum(axis=-1)

    def scalar(self, g: float) -> float:
        return float(np.max(self.alphas * g + self.betas))

    def subdiff(self, z, tol=ACTIVE_TOL):
        z = _vec(z, self.dim)
        a, b = self.alphas, self.betas
        lo, hi = np.empty(self.dim), np.empty(self.dim)
        for k, g in enumerate(z):
            vals = a * g + b
            top = vals.max()
            active = vals >= top - tol * max(1.0, abs(top))
            lo[k], hi[k] = a[active].min(), a[active].max()
        return IntervalBox(lo, hi)

    def _hull(self):
        # lower convex hull of the points (alpha_i, -beta_i)
        pts = [(a, -b) for a, b in self.pieces]
        hull = []
        for p in pts:
            while len(hull) >= 2:
                (x1, y1), (x2, y2) = hull[-2], hull[-1]
                if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                    hull.pop()
                else:
                    break
            hull.append(p)
        return np.array(hull)

    def scalar_conjugate(self, v: float) -> float:
        hull = self._hull()
        xs, ys = hull[:, 0], hull[:, 1]
        if v < xs[0] or v > xs[-1]:
            return INF
        return float(np.interp(v, xs, ys))

    def conjugate(self, y):
        y = _vec(y, self.dim)
        return float(sum(self.scalar_conjugate(v) for v in y))

    def conjugate_domain(self):
        a = self.alphas
        return IntervalBox(np.full(self.dim, a[0]), np.full(self.dim, a[-1]))

    def conjugate_subgradient(self, y):
        hull = self._hull()
        xs, ys = hull[:, 0], hull[:, 1]
        out = np.zeros(self.dim)
        if len(xs) == 1:
            return out
        slopes = np.diff(ys) / np.diff(xs)
        for k, v in enumerate(_vec(y, self.dim)):
            j = int(np.clip(np.searchsorted(xs, v, side="right") - 1, 0, len(slopes) - 1))
            out[k] = slopes[j]
        return out


@dataclass(frozen=True)
class MaxCoord(MonitoringFn):
    """``z -> max_i z_i``; its subgradients form a simplex over active coordinates."""

    dim: int

    def eval_many(self, Z, tol=0.0):
        return np.asarray(Z, dtype=float).max(axis=1)

    def subdiff(self, z, tol=ACTIVE_TOL):
        z = _vec(z, self.dim)
        top = z.max()
        active = z >= top - tol * max(1.0, abs(top))
        return IntervalBox(np.zeros(self.dim), np.where(active, 1.0, 0.0), total=1.0)

    def conjugate(self, y, tol: float = 1e-12):
        y = _vec(y, self.dim)
        ok = np.all(y >= -tol) and abs(y.sum() - 1.0) <= tol * self.dim
        return 0.0 if ok else INF

    def conjugate_domain(self):
        return IntervalBox(np.zeros(self.dim), np.ones(self.dim), total=1.0)

    def conjugate_subgradient(self, y):
        return np.zeros(self.dim)


@dataclass(frozen=True)
class Separable(MonitoringFn):
    """Concatenation ``h(z) = sum_k h_k(z_k)`` over consecutive blocks of ``z``."""

    parts: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise ValueError("Separable needs at least one part")
        if any(isinstance(p, MaxCoord) for p in self.parts):
            # the sum constraint would not survive box concatenation
            raise ValueError("MaxCoord cannot be a Separable block")

    @property
    def dim(self):
        return sum(p.dim for p in self.parts)

    @property
    def real_valued(self):
        return all(p.real_valued for p in self.parts)

    def _blocks(self):
        start = 0
        for p in self.parts:
            yield p, slice(start, start + p.dim)
            start += p.dim

    def eval_many(self, Z, tol=0.0):
        Z = np.asarray(Z, dtype=float)
        out = np.zeros(Z.shape[0])
        for p, sl in self._blocks():
            out = out + p.eval_many(Z[:, sl], tol)  # values are never -inf
        return out

    def _cat(self, method, z, *args):
        z = _vec(z, self.dim)
        box = None
        for p, sl in self._blocks():
            b = getattr(p, method)(z[sl], *args)
            box = b if box is None else box.concat(b)
        return box

    def subdiff(self, z, tol=ACTIVE_TOL):
        return self._cat("subdiff", z, tol)

    def domain_normal(self, z, tol=ACTIVE_TOL):
        return self._cat("domain_normal", z, tol)

    def conjugate(self, y):
        y = _vec(y, self.dim)
        total = 0.0
        for p, sl in self._blocks():
            total += p.conjugate(y[sl])
        return total

    def conjugate_domain(self):
        box = None
        for p, _ in self._blocks():
            b = p.conjugate_domain()
            box = b if box is None else box.concat(b)
        return box

    def conjugate_subgradient(self, y):
        y = _vec(y, self.dim)
        return np.concatenate([p.conjugate_subgradient(y[sl]) for p, sl in self._blocks()])


def h_eval(h: MonitoringFn, z, tol: float = 0.0) -> float:
    return h.eval(z, tol)


def h_subdiff(h: MonitoringFn, z, tol: float = ACTIVE_TOL) -> IntervalBox:
    return h.subdiff(z, tol)


def h_conjugate(h: MonitoringFn, y) -> float:
    return h.conjugate(y)


def h_domain_normal(h: MonitoringFn, z, tol: float = ACTIVE_TOL) -> IntervalBox:
    return h.domain_normal(z, tol)


# --- text format -----------------------------------------------------------

def format_monitoring(h: MonitoringFn) -> str:
    if isinstance(h, IndicatorZero):
        return f"zero {h.dim}"
    if isinstance(h, IndicatorNonpos):
        return f"nonpos {h.dim}"
    if isinstance(h, GoalPenalty):
        return "goal " + " ".join(repr(v) for v in h.theta + h.tau)
    if isinstance(h, WeightedSum):
        return "wsum " + " ".join(repr(v) for v in h.p)
    if isinstance(h, PwaMax):
        return f"pwa {h.dim} " + " ".join(f"{a!r}:{b!r}" for a, b in h.pieces)
    if isinstance(h, MaxCoord):
        return f"max {h.dim}"
    if isinstance(h, Separable):
        return "sep " + " | ".join(format_monitoring(p) for p in h.parts)
    raise TypeError(f"unknown monitoring function {h!r}")


def parse_monitoring(text: str) -> MonitoringFn:
    tokens = text.split()
    if not tokens:
        raise ValueError("empty monitoring function description")
    kind, args = tokens[0], tokens[1:]
    if kind == "sep":
        chunks = " ".join(args).split("|")
        return Separable(tuple(parse_monitoring(c) for c in chunks))
    if kind == "zero":
        return IndicatorZero(int(args[0]))
    if kind == "nonpos":
        return IndicatorNonpos(int(args[0]))
    if kind == "max":
        return MaxCoord(int(args[0]))
    if kind == "goal":
        vals = [float(a) for a in args]
        if len(vals) % 2:
            raise ValueError("goal needs theta_1..theta_m tau_1..tau_m")
        m = len(vals) // 2
        return GoalPenalty(tuple(vals[:m]), tuple(vals[m:]))
    if kind == "wsum":
        return WeightedSum(tuple(float(a) for a in args))
    if kind == "pwa":
        pieces = []
        for tok in args[1:]:
            a, b = tok.split(":")
            pieces.append((float(a), float(b)))
        return PwaMax(tuple(pieces), int(args[0]))
    raise ValueError(f"unknown monitoring variant {kind!r}")


def make_pieces(pairs: Sequence) -> tuple:
    return tuple((float(a), float(b)) for a, b in pairs)
