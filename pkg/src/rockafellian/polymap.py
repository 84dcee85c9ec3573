"""Polynomial maps ``R^n -> R^m`` with exact Jacobians.

An output is a sum of monomials ``coef * prod_j x_j**e_j``.  Outputs tagged
``invpoly`` may carry negative exponents (``beta*rho/x`` in an order-quantity
model); they are defined only where the affected coordinates are positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .extreal import DomainError

KINDS = ("poly", "invpoly")


@dataclass(frozen=True)
class PolyMap:
    n: int
    outputs: tuple
    kinds: tuple = None

    def __post_init__(self):
        outs = []
        for terms in self.outputs:
            row = []
            for coef, exps in terms:
                exps = tuple(int(e) for e in exps)
                if len(exps) != self.n:
                    raise ValueError(f"term exponents {exps} do not match n={self.n}")
                row.append((float(coef), exps))
            outs.append(tuple(row))
        kinds = self.kinds or ("poly",) * len(outs)
        if len(kinds) != len(outs):
            raise ValueError("one kind per output required")
        for kind, terms in zip(kinds, outs):
            if kind not in KINDS:
                raise ValueError(f"unknown output kind {kind!r}")
            if kind == "poly" and any(e < 0 for _, ex in terms for e in ex):
                raise ValueError("negative exponents need an invpoly output")
        object.__setattr__(self, "outputs", tuple(outs))
        object.__setattr__(self, "kinds", tuple(kinds))

    @property
    def m(self) -> int:
        return len(self.outputs)

    @classmethod
    def affine(cls, A, b) -> "PolyMap":
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.atleast_1d(np.asarray(b, dtype=float))
        n = A.shape[1]
        outs = []
        for row, bi in zip(A, b):
            terms = [(a, tuple(int(k == j) for k in range(n))) for j, a in enumerate(row) if a != 0]
            if bi != 0:
                terms.append((bi, (0,) * n))
            outs.append(terms)
        return cls(n, tuple(outs))

    @classmethod
    def univariate(cls, *coeff_lists: Sequence[float]) -> "PolyMap":
        """Scalar polynomials given low-to-high coefficients, e.g. ``[8, -6, 1]``."""
        outs = [[(c, (k,)) for k, c in enumerate(cl) if c != 0] for cl in coeff_lists]
        return cls(1, tuple(outs))

    def _neg_mask(self):
        mask = np.zeros(self.n, dtype=bool)
        for terms in self.outputs:
            for _, ex in terms:
                mask |= np.array(ex) < 0
        return mask

    def domain_mask(self, xs: np.ndarray) -> np.ndarray:
        neg = self._neg_mask()
        if not neg.any():
            return np.ones(xs.shape[0], dtype=bool)
        return np.all(xs[:, neg] > 0, axis=1)

    def in_domain(self, x) -> bool:
        return bool(self.domain_mask(np.atleast_2d(np.asarray(x, dtype=float)))[0])

    def eval_many(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        ok = self.domain_mask(xs)
        safe = np.where(ok[:, None], xs, 1.0)
        out = np.zeros((xs.shape[0], self.m))
        for i, terms in enumerate(self.outputs):
            for coef, ex in terms:
                out[:, i] += coef * np.prod(safe ** np.array(ex, dtype=float), axis=1)
        out[~ok] = np.nan
        return out

    def __call__(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape != (self.n,):
            raise ValueError(f"expected dimension {self.n}")
        if not self.in_domain(x):
            raise DomainError(f"{x} outside the domain of the map")
        return self.eval_many(x[None, :])[0]

    def jacobian(self, x) -> np.ndarray:
        """``(m, n)`` matrix of partial derivatives."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if not self.in_domain(x):
            raise DomainError(f"{x} outside the domain of the map")
        J = np.zeros((self.m, self.n))
        for i, terms in enumerate(self.outputs):
            for coef, ex in terms:
                ex = np.array(ex, dtype=float)
                for j in range(self.n):
                    if ex[j] == 0:
                        continue
                    e2 = ex.copy()
                    e2[j] -= 1
                    J[i, j] += coef * ex[j] * np.prod(x ** e2)
        return J

    def format_output(self, i: int) -> str:
        terms = " ".join(f"{c!r}:" + ",".join(str(e) for e in ex) for c, ex in self.outputs[i])
        return f"{self.kinds[i]} {terms}".rstrip()


def parse_terms(n: int, tokens: Sequence[str]) -> list:
    terms = []
    for tok in tokens:
        coef, _, exps = tok.partition(":")
        ex = tuple(int(e) for e in exps.split(",")) if exps else (0,) * n
        terms.append((float(coef), ex))
    return terms


def grad_check(F: PolyMap, x, step: float = 1e-6) -> dict:
    """Compare the analytic Jacobian with central differences."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    J = F.jacobian(x)
    fd = np.zeros_like(J)
    for j in range(F.n):
        e = np.zeros(F.n)
        e[j] = step
        if not (F.in_domain(x + e) and F.in_domain(x - e)):
            raise DomainError("finite-difference stencil leaves the domain")
        fd[:, j] = (F(x + e) - F(x - e)) / (2 * step)
    rel = np.abs(J - fd) / np.maximum(1.0, np.abs(J))
    return {"analytic": J, "fd": fd, "rel_error": rel, "max_rel_error": float(rel.max(initial=0.0))}
