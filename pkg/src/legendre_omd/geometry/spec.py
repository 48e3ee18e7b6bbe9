"""Distance-generating functions, Bregman divergences and prox-mappings.

A :class:`GeometrySpec` pairs a regularizer with a domain.  One-dimensional
pairings dispatch to the scalar kernels; the simplex (negative entropy) and
the unit ball (Hellinger, Euclidean) have NumPy implementations.

Supported pairings:

====================  =========================================
regularizer           domains
====================  =========================================
euclidean             fullspace, halfline, unitinterval, ball
entropy               halfline, unitinterval, simplex
tsallis (q > 0)       halfline, unitinterval
fracpow (0 < p < 1)   halfline
sqrt                  halfline (fracpow with power 1/2)
hellinger             ball
====================  =========================================

Specs are immutable; every operation is a pure function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..domains import (Domain, FULL_SPACE, HALFLINE, MEMBERSHIP_TOL, SIMPLEX,
                       UNIT_BALL, UNIT_INTERVAL, half_line)
from ..errors import DomainError, NumericalError, ProxDomainError
from . import kernels as K

EUCLIDEAN = "euclidean"
ENTROPY = "entropy"
TSALLIS = "tsallis"
FRACPOW = "fracpow"
SQRT = "sqrt"
HELLINGER = "hellinger"

_SCALAR_CODES = {
    (EUCLIDEAN, FULL_SPACE): K.EUCLID_FULL,
    (EUCLIDEAN, HALFLINE): K.EUCLID_HALF,
    (EUCLIDEAN, UNIT_INTERVAL): K.EUCLID_UNIT,
    (EUCLIDEAN, UNIT_BALL): K.EUCLID_BALL1,
    (ENTROPY, HALFLINE): K.ENTROPY_HALF,
    (ENTROPY, UNIT_INTERVAL): K.ENTROPY_UNIT,
    (TSALLIS, HALFLINE): K.TSALLIS_HALF,
    (TSALLIS, UNIT_INTERVAL): K.TSALLIS_UNIT,
    (FRACPOW, HALFLINE): K.FRACPOW_HALF,
    (SQRT, HALFLINE): K.FRACPOW_HALF,
    (HELLINGER, UNIT_BALL): K.HELLINGER_1D,
}

_VECTOR_PAIRINGS = {
    (EUCLIDEAN, FULL_SPACE),
    (EUCLIDEAN, UNIT_BALL),
    (ENTROPY, SIMPLEX),
    (HELLINGER, UNIT_BALL),
}

_FLOOR = 1e-300


@dataclass(frozen=True)
class GeometrySpec:
    name: str
    domain: Domain
    param: float = 0.0   # tsallis order q or fractional power p

    def __post_init__(self):
        if self.name == TSALLIS and self.param <= 0.0:
            raise DomainError("tsallis order q must be positive")
        if self.name == FRACPOW and not 0.0 < self.param < 1.0:
            raise DomainError("fractional power p must lie in (0, 1)")
        pair = (self.name, self.domain.kind)
        if self.domain.is_scalar:
            if pair not in _SCALAR_CODES:
                raise DomainError(f"unsupported pairing {self.name!r} on {self.domain.kind!r}")
        elif pair not in _VECTOR_PAIRINGS:
            raise DomainError(
                f"unsupported pairing {self.name!r} on {self.domain.kind!r} (dim {self.domain.dim})")

    @property
    def key(self) -> str:
        if self.name == TSALLIS:
            return f"tsallis:q={self.param:g}"
        if self.name == FRACPOW:
            return f"fracpow:p={self.param:g}"
        return self.name

    @property
    def is_scalar(self) -> bool:
        return self.domain.is_scalar

    @property
    def code(self) -> int:
        return _SCALAR_CODES[(self.name, self.domain.kind)]

    @property
    def a(self) -> float:
        """Kernel parameter (tsallis order / fractional power)."""
        if self.name == SQRT:
            return 0.5
        return self.param

    # -- membership ---------------------------------------------------------

    def in_prox_domain(self, x, tol: float = MEMBERSHIP_TOL) -> bool:
        if not self.domain.contains(x, tol):
            return False
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        if self.name == EUCLIDEAN:
            return True
        if self.name == ENTROPY:
            if self.domain.kind == UNIT_INTERVAL:
                return bool(0.0 < x[0] < 1.0)
            return bool(np.all(x > 0.0))
        if self.name == TSALLIS:
            if self.param > 1.0:
                return True
            if self.domain.kind == UNIT_INTERVAL:
                return bool(0.0 < x[0] < 1.0)
            return bool(x[0] > 0.0)
        if self.name in (FRACPOW, SQRT):
            return bool(x[0] > 0.0)
        # hellinger: open ball
        return bool(np.linalg.norm(x) < 1.0)

    def norm(self, v) -> float:
        return self.domain.norm(v)

    def dual_norm(self, y) -> float:
        return self.domain.dual_norm(y)

    # -- sampling regions for property checks -------------------------------

    def strong_convexity_box(self) -> float:
        """Upper edge of the region where the 1-strong-convexity inequality
        holds.  The half-line regularizers are only locally 1-strongly
        convex: h'' >= 1 requires x <= 1 for entropy and tsallis (q <= 2)
        and x <= p^(1/(2-p)) for the fractional powers."""
        if self.domain.kind != HALFLINE:
            return math.inf
        if self.name == EUCLIDEAN:
            return math.inf
        if self.name in (FRACPOW, SQRT):
            return self.a ** (1.0 / (2.0 - self.a))
        return 1.0


def _parse_param(rest: str, want: str) -> float:
    k, _, v = rest.partition("=")
    if k.strip() != want:
        raise DomainError(f"expected parameter {want!r}, got {k!r}")
    return float(v)


def get_geometry(key: str, domain: Domain | None = None) -> GeometrySpec:
    """Resolve a registry key like ``entropy`` or ``tsallis:q=0.5``.

    ``domain`` defaults to the half-line.
    """
    domain = domain if domain is not None else half_line()
    name, _, rest = key.strip().lower().partition(":")
    if name == EUCLIDEAN:
        return GeometrySpec(EUCLIDEAN, domain)
    if name == ENTROPY:
        return GeometrySpec(ENTROPY, domain)
    if name == TSALLIS:
        if not rest:
            raise DomainError("tsallis needs an order, e.g. 'tsallis:q=0.5'")
        q = _parse_param(rest, "q")
        if q == 1.0:
            return GeometrySpec(ENTROPY, domain)  # continuity in the order
        return GeometrySpec(TSALLIS, domain, q)
    if name == FRACPOW:
        if not rest:
            raise DomainError("fracpow needs a power, e.g. 'fracpow:p=0.5'")
        return GeometrySpec(FRACPOW, domain, _parse_param(rest, "p"))
    if name == SQRT:
        return GeometrySpec(SQRT, domain, 0.5)
    if name == HELLINGER:
        return GeometrySpec(HELLINGER, domain)
    raise DomainError(f"unknown geometry key {key!r}")


GEOMETRY_KEYS = (EUCLIDEAN, ENTROPY, "tsallis:q=<q>", "fracpow:p=<p>", SQRT, HELLINGER)


# -- vector implementations --------------------------------------------------

def _vec_h(g: GeometrySpec, x: np.ndarray) -> float:
    if g.name == EUCLIDEAN:
        return 0.5 * float(x @ x)
    if g.name == ENTROPY:
        xs = x[x > 0.0]
        return float(np.sum(xs * np.log(xs)))
    return -math.sqrt(max(1.0 - float(x @ x), 0.0))


def _vec_grad(g: GeometrySpec, x: np.ndarray) -> np.ndarray:
    if g.name == EUCLIDEAN:
        return x.copy()
    if g.name == ENTROPY:
        return 1.0 + np.log(x)
    return x / math.sqrt(1.0 - float(x @ x))


def _vec_div(g: GeometrySpec, p: np.ndarray, x: np.ndarray) -> float:
    if g.name == EUCLIDEAN:
        d = p - x
        return 0.5 * float(d @ d)
    if g.name == ENTROPY:
        mask = p > 0.0
        kl = float(np.sum(p[mask] * np.log(p[mask] / x[mask])))
        return kl + float(x.sum() - p.sum())
    sx = math.sqrt(1.0 - float(x @ x))
    sp = math.sqrt(max(1.0 - float(p @ p), 0.0))
    return (1.0 - float(p @ x) - sp * sx) / sx


def _vec_prox(g: GeometrySpec, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if g.name == EUCLIDEAN:
        v = x + y
        if g.domain.kind == UNIT_BALL:
            n = np.linalg.norm(v)
            if n > 1.0:
                v = v / n
        return v
    if g.name == ENTROPY:
        z = np.log(x) + y
        z -= z.max()
        w = np.exp(z)
        w = np.maximum(w, _FLOOR)
        return w / w.sum()
    w = x / math.sqrt(1.0 - float(x @ x)) + y
    n2 = float(w @ w)
    if n2 > 1e300:
        r = w / np.linalg.norm(w)
        return r * (1.0 - 1e-15)
    r = w / math.sqrt(1.0 + n2)
    n = np.linalg.norm(r)
    if n > 1.0 - 1e-15:
        r *= (1.0 - 1e-15) / n
    return r


# -- public operations -------------------------------------------------------

def _as_scalar(x) -> float:
    return float(np.asarray(x, dtype=np.float64).reshape(()))


def eval_h(g: GeometrySpec, x) -> float:
    """Value of the distance-generating function at a feasible point."""
    if not g.domain.contains(x):
        raise DomainError(f"point {x!r} outside domain {g.domain.kind}")
    if g.is_scalar:
        return float(K.h_scalar(g.code, g.a, _as_scalar(x)))
    return _vec_h(g, np.asarray(x, dtype=np.float64))


def grad_h(g: GeometrySpec, x) -> float | np.ndarray:
    """Continuous gradient selection; defined on the prox-domain only."""
    if not g.in_prox_domain(x):
        raise ProxDomainError(f"point {x!r} outside prox-domain of {g.key}")
    if g.is_scalar:
        return float(K.grad_scalar(g.code, g.a, _as_scalar(x)))
    return _vec_grad(g, np.asarray(x, dtype=np.float64))


def divergence(g: GeometrySpec, p, x) -> float:
    """Bregman divergence D(p, x) = h(p) - h(x) - <grad h(x), p - x>."""
    if not g.domain.contains(p):
        raise DomainError(f"target {p!r} outside domain {g.domain.kind}")
    if not g.in_prox_domain(x):
        raise ProxDomainError(f"point {x!r} outside prox-domain of {g.key}")
    if g.is_scalar:
        return float(K.div_scalar(g.code, g.a, _as_scalar(p), _as_scalar(x)))
    return _vec_div(g, np.asarray(p, dtype=np.float64), np.asarray(x, dtype=np.float64))


def prox(g: GeometrySpec, x, y):
    """Prox-mapping: argmin over the domain of <y, x - x'> + D(x', x).

    The result always lies in the prox-domain.  Raises
    :class:`NumericalError` when the step is unbounded or overflows.
    """
    if not g.in_prox_domain(x):
        raise ProxDomainError(f"base point {x!r} outside prox-domain of {g.key}")
    y_arr = np.asarray(y, dtype=np.float64)
    if not np.all(np.isfinite(y_arr)):
        raise NumericalError(f"non-finite dual step {y!r}")
    if g.is_scalar:
        r = float(K.prox_scalar(g.code, g.a, _as_scalar(x), float(y_arr.reshape(()))))
        if not math.isfinite(r):
            raise NumericalError(
                f"unbounded prox step for {g.key}: x={x!r}, y={y!r}")
        return r
    r = _vec_prox(g, np.asarray(x, dtype=np.float64), y_arr)
    if not np.all(np.isfinite(r)):
        raise NumericalError(f"prox overflow for {g.key}")
    return r
