"""Legendre exponents: analytic values and an empirical estimator.

The Legendre exponent of a regularizer at a base point is the smallest
``beta`` in ``[0, 1)`` with ``D(p, x) <= C/2 * ||p - x||^(2(1-beta))`` on a
neighborhood of ``p``; ``beta = 1`` is the convention for geometries whose
divergence does not vanish along norm-convergent sequences (Hellinger at the
boundary of the ball).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..domains import (Domain, FULL_SPACE, HALFLINE, SIMPLEX, UNIT_BALL,
                       UNIT_INTERVAL, half_line, simplex, unit_ball,
                       unit_interval)
from ..errors import DomainError, InsufficientDataError
from .spec import (ENTROPY, EUCLIDEAN, FRACPOW, HELLINGER, SQRT, TSALLIS,
                   GeometrySpec, divergence, get_geometry)


@dataclass(frozen=True)
class LegendreExponent:
    beta: float
    C: float | None      # None when beta == 1 (no finite constant exists)
    radius: float

    def holds(self, dist: float, div: float, slack: float = 1e-10) -> bool:
        """Check the defining upper bound at one sampled pair."""
        if self.beta >= 1.0 or self.C is None:
            return True
        return div <= 0.5 * self.C * dist ** (2.0 * (1.0 - self.beta)) + slack


def _interior_hessian_bound(g: GeometrySpec, p, radius: float) -> float:
    """Curvature constant: sup of h'' (operator norm of the Hessian) over the
    norm ball of the given radius around p, for twice-differentiable spots."""
    if g.name == EUCLIDEAN:
        return 1.0
    if g.is_scalar:
        x = float(p)
        lo, hi = x - radius, x + radius
        if g.name == ENTROPY:
            if g.domain.kind == UNIT_INTERVAL:
                return 1.0 / lo + 1.0 / (1.0 - hi)
            return 1.0 / lo
        if g.name == TSALLIS:
            q = g.a
            def t_h2(t: float) -> float:
                return t ** (q - 2.0)
            if g.domain.kind == UNIT_INTERVAL:
                return max(t_h2(lo) + t_h2(1.0 - hi), t_h2(hi) + t_h2(1.0 - lo))
            return max(t_h2(lo), t_h2(hi))
        if g.name in (FRACPOW, SQRT):
            pw = g.a
            return pw * lo ** (pw - 2.0)
        # hellinger 1-d: h'' = (1 - x^2)^(-3/2)
        m = max(abs(lo), abs(hi))
        return (1.0 - m * m) ** -1.5
    if g.name == ENTROPY:  # simplex, L1 norm
        m = float(np.min(np.asarray(p))) - radius
        return 2.0 / m
    if g.name == HELLINGER:
        s = (float(np.linalg.norm(p)) + radius) ** 2
        return (1.0 - s) ** -1.5
    return 1.0


def legendre_exponent(g: GeometrySpec, p) -> LegendreExponent:
    """Analytic Legendre exponent of ``g`` at the base point ``p``.

    Interior base points of twice-differentiable regularizers get
    ``beta = 0`` with a local curvature constant; boundary points get the
    regularizer's boundary exponent.  The constant is measured empirically
    where no clean closed form exists (simplex entropy boundary, two-sided
    Tsallis boundary).
    """
    if not g.domain.contains(p):
        raise DomainError(f"base point {p!r} outside domain")
    arr = np.atleast_1d(np.asarray(p, dtype=np.float64))

    if g.name == EUCLIDEAN:
        return LegendreExponent(0.0, 1.0, math.inf)

    interior = g.in_prox_domain(p) and _boundary_gap(g, arr) > 0.0
    if interior:
        radius = 0.5 * _boundary_gap(g, arr)
        return LegendreExponent(0.0, _interior_hessian_bound(g, p, radius), radius)

    # boundary base points
    if g.name == ENTROPY:
        if g.domain.kind == HALFLINE:
            return LegendreExponent(0.5, 2.0, math.inf)       # D(0, x) = x exactly
        if g.domain.kind == UNIT_INTERVAL:
            return LegendreExponent(0.5, _measure_constant(g, p, 0.5, 0.25), 0.25)
        return LegendreExponent(0.5, _measure_constant(g, p, 0.5, 0.25), 0.25)
    if g.name == TSALLIS:
        q = g.a
        beta = max(0.0, 1.0 - q / 2.0)
        if g.domain.kind == HALFLINE:
            if q < 2.0:
                return LegendreExponent(beta, 2.0 / q, math.inf)  # D(0, x) = x^q / q
            return LegendreExponent(0.0, _measure_constant(g, p, 0.0, 0.5), 0.5)
        return LegendreExponent(beta, _measure_constant(g, p, beta, 0.25), 0.25)
    if g.name in (FRACPOW, SQRT):
        return LegendreExponent(1.0 - g.a / 2.0, 2.0, math.inf)  # D(0, x) = x^p
    # hellinger at the boundary: divergence does not vanish along norm limits
    return LegendreExponent(1.0, None, 0.0)


def _boundary_gap(g: GeometrySpec, p: np.ndarray) -> float:
    """Norm distance from p to the boundary where the regularizer is steep
    or loses smoothness (inf when h is globally smooth, as for euclidean)."""
    if g.name == EUCLIDEAN:
        return math.inf
    kind = g.domain.kind
    if kind == HALFLINE:
        return float(p[0])
    if kind == UNIT_INTERVAL:
        return float(min(p[0], 1.0 - p[0]))
    if kind == SIMPLEX:
        return float(np.min(p))
    if kind == UNIT_BALL:
        return float(1.0 - np.linalg.norm(p))
    return math.inf


def _sphere_points(g: GeometrySpec, p: np.ndarray, r: float, n_dirs: int,
                   rng: np.random.Generator) -> list:
    """Points of the norm sphere of radius r around p, inside the domain."""
    d = g.domain.dim
    pts = []
    if g.is_scalar:
        for s in (1.0, -1.0):
            x = float(p[0] + s * r)
            if g.in_prox_domain(x):
                pts.append(x)
        return pts
    if g.domain.kind == SIMPLEX:
        for _ in range(n_dirs):
            v = rng.standard_normal(d)
            zero = p <= 0.0
            v[zero] = np.abs(v[zero])
            free = ~zero
            if free.any():
                v[free] -= v.sum() / free.sum()
            if abs(v.sum()) > 1e-9 or np.abs(v).sum() == 0.0:
                continue
            x = p + r * v / np.abs(v).sum()
            if g.in_prox_domain(x):
                pts.append(x)
        return pts
    for _ in range(n_dirs):
        v = rng.standard_normal(d)
        v /= np.linalg.norm(v)
        x = p + r * v
        if g.in_prox_domain(x):
            pts.append(x)
    return pts


def estimate_legendre_exponent(g: GeometrySpec, p, radii, n_dirs: int = 64,
                               seed: int = 0) -> float:
    """Empirical Legendre exponent from the growth of sup D over norm spheres.

    Fits ``log max D`` against ``log r`` over the given decreasing radii and
    returns ``1 - slope/2`` clipped to [0, 1].  Needs at least 8 radii with a
    nonempty sphere sample.
    """
    radii = np.asarray(radii, dtype=np.float64)
    if radii.size < 8:
        raise InsufficientDataError(f"need >= 8 radii, got {radii.size}")
    if np.any(radii <= 0.0) or np.any(np.diff(radii) >= 0.0):
        raise DomainError("radii must be positive and strictly decreasing")
    arr = np.atleast_1d(np.asarray(p, dtype=np.float64))
    rng = np.random.default_rng(seed)
    log_r, log_d = [], []
    for r in radii:
        pts = _sphere_points(g, arr, float(r), n_dirs, rng)
        if not pts:
            continue
        best = max(divergence(g, p, x) for x in pts)
        if best > 0.0 and math.isfinite(best):
            log_r.append(math.log(r))
            log_d.append(math.log(best))
    if len(log_r) < 8:
        raise InsufficientDataError(f"only {len(log_r)} valid radii")
    slope = np.polyfit(np.array(log_r), np.array(log_d), 1)[0]
    return float(min(1.0, max(0.0, 1.0 - slope / 2.0)))


def _measure_constant(g: GeometrySpec, p, beta: float, radius: float) -> float:
    """Measured constant for the defining upper bound (with 5% headroom)."""
    rng = np.random.default_rng(7)
    arr = np.atleast_1d(np.asarray(p, dtype=np.float64))
    worst = 0.0
    for r in np.geomspace(radius, radius * 1e-6, 25):
        for x in _sphere_points(g, arr, float(r), 32, rng):
            d = divergence(g, p, x)
            worst = max(worst, 2.0 * d / r ** (2.0 * (1.0 - beta)))
    return worst * 1.05


DEFAULT_RADII = tuple(2.0 ** -k for k in range(4, 15))


@dataclass(frozen=True)
class RegistryCase:
    """A (geometry, base point) pair with its analytic exponent."""
    label: str
    geometry: GeometrySpec
    point: object
    beta: float


def registry_cases() -> list[RegistryCase]:
    """Named (geometry, base point) cases with known analytic exponents."""
    hl = half_line()
    ui = unit_interval()
    cases = [
        RegistryCase("euclidean@0", get_geometry("euclidean", hl), 0.0, 0.0),
        RegistryCase("euclidean@0.3", get_geometry("euclidean", hl), 0.3, 0.0),
        RegistryCase("entropy-halfline@0", get_geometry("entropy", hl), 0.0, 0.5),
        RegistryCase("entropy-halfline@0.5", get_geometry("entropy", hl), 0.5, 0.0),
        RegistryCase("entropy-interval@0", get_geometry("entropy", ui), 0.0, 0.5),
        RegistryCase("entropy-interval@0.5", get_geometry("entropy", ui), 0.5, 0.0),
        RegistryCase("tsallis-q0.5@0", get_geometry("tsallis:q=0.5", hl), 0.0, 0.75),
        RegistryCase("tsallis-q1.5@0", get_geometry("tsallis:q=1.5", hl), 0.0, 0.25),
        RegistryCase("fracpow-p0.5@0", get_geometry("fracpow:p=0.5", hl), 0.0, 0.75),
        RegistryCase("sqrt@0", get_geometry("sqrt", hl), 0.0, 0.75),
        RegistryCase("simplex-entropy@boundary",
                     get_geometry("entropy", simplex(3)),
                     np.array([0.0, 0.5, 0.5]), 0.5),
        RegistryCase("simplex-entropy@interior",
                     get_geometry("entropy", simplex(3)),
                     np.array([1.0, 1.0, 1.0]) / 3.0, 0.0),
        RegistryCase("hellinger@interior", get_geometry("hellinger", unit_ball(2)),
                     np.array([0.3, 0.0]), 0.0),
        RegistryCase("hellinger@boundary", get_geometry("hellinger", unit_ball(2)),
                     np.array([1.0, 0.0]), 1.0),
    ]
    return cases
