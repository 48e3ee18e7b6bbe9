"""Feasible domains: closed convex sets with membership tests and norms.

The ambient norm is Euclidean everywhere except the simplex, which uses the
L1 norm (dual: max-norm).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

MEMBERSHIP_TOL = 1e-12

HALFLINE = "halfline"
UNIT_INTERVAL = "unitinterval"
SIMPLEX = "simplex"
UNIT_BALL = "ball"
FULL_SPACE = "fullspace"

_KINDS = (HALFLINE, UNIT_INTERVAL, SIMPLEX, UNIT_BALL, FULL_SPACE)


@dataclass(frozen=True)
class Domain:
    kind: str
    dim: int = 1

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown domain kind {self.kind!r}")
        if self.dim < 1:
            raise DomainError(f"dimension must be positive, got {self.dim}")
        if self.kind in (HALFLINE, UNIT_INTERVAL) and self.dim != 1:
            raise DomainError(f"{self.kind} is one-dimensional")
        if self.kind == SIMPLEX and self.dim < 2:
            raise DomainError("simplex needs dimension >= 2")

    @property
    def is_scalar(self) -> bool:
        return self.dim == 1 and self.kind != SIMPLEX

    def contains(self, x, tol: float = MEMBERSHIP_TOL) -> bool:
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        if x.shape != (self.dim,):
            return False
        if not np.all(np.isfinite(x)):
            return False
        if self.kind == FULL_SPACE:
            return True
        if self.kind == HALFLINE:
            return bool(x[0] >= -tol)
        if self.kind == UNIT_INTERVAL:
            return bool(-tol <= x[0] <= 1.0 + tol)
        if self.kind == UNIT_BALL:
            return bool(np.linalg.norm(x) <= 1.0 + tol)
        # simplex
        return bool(np.all(x >= -tol) and abs(x.sum() - 1.0) <= tol)

    def norm(self, v) -> float:
        v = np.atleast_1d(np.asarray(v, dtype=np.float64))
        if self.kind == SIMPLEX:
            return float(np.abs(v).sum())
        return float(np.linalg.norm(v))

    def dual_norm(self, y) -> float:
        y = np.atleast_1d(np.asarray(y, dtype=np.float64))
        if self.kind == SIMPLEX:
            return float(np.abs(y).max())
        return float(np.linalg.norm(y))

    def sample(self, rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
        """Sample n points from the domain (uniform-ish; for property tests).

        ``scale`` bounds the sampling box for unbounded domains.
        """
        if self.kind == FULL_SPACE:
            return rng.uniform(-scale, scale, size=(n, self.dim))
        if self.kind == HALFLINE:
            return rng.uniform(0.0, scale, size=(n, 1))
        if self.kind == UNIT_INTERVAL:
            return rng.uniform(0.0, 1.0, size=(n, 1))
        if self.kind == UNIT_BALL:
            g = rng.standard_normal((n, self.dim))
            g /= np.linalg.norm(g, axis=1, keepdims=True)
            r = rng.uniform(0.0, 1.0, size=(n, 1)) ** (1.0 / self.dim)
            return g * r
        return rng.dirichlet(np.ones(self.dim), size=n)


def half_line() -> Domain:
    return Domain(HALFLINE, 1)


def unit_interval() -> Domain:
    return Domain(UNIT_INTERVAL, 1)


def simplex(d: int) -> Domain:
    return Domain(SIMPLEX, d)


def unit_ball(d: int) -> Domain:
    return Domain(UNIT_BALL, d)


def full_space(d: int = 1) -> Domain:
    return Domain(FULL_SPACE, d)


def get_domain(key: str) -> Domain:
    """Parse a domain key like ``halfline`` or ``simplex:d=3``."""
    name, _, rest = key.partition(":")
    name = name.strip().lower()
    dim = 1
    if rest:
        k, _, v = rest.partition("=")
        if k.strip() != "d":
            raise DomainError(f"unknown domain parameter {k!r} in {key!r}")
        dim = int(v)
    if name == SIMPLEX and not rest:
        raise DomainError("simplex domain needs a dimension, e.g. 'simplex:d=3'")
    if name == UNIT_BALL and not rest:
        dim = 1
    return Domain(name, dim)
