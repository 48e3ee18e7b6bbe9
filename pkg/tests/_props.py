"""Shared sampling machinery for the geometry property suites."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from legendre_omd import get_geometry, half_line, simplex, unit_ball, unit_interval
from legendre_omd.geometry.spec import GeometrySpec, _vec_div, _vec_grad, _vec_prox
from legendre_omd.geometry import kernels as K


@dataclass
class GeomCase:
    label: str
    g: GeometrySpec
    clip_y: float = 0.0      # clip dual steps (steep half-line geometries
                             # have a bounded dual range)


def geometry_cases() -> list[GeomCase]:
    hl, ui = half_line(), unit_interval()
    return [
        GeomCase("euclid-halfline", get_geometry("euclidean", hl)),
        GeomCase("euclid-interval", get_geometry("euclidean", ui)),
        GeomCase("entropy-halfline", get_geometry("entropy", hl)),
        GeomCase("entropy-interval", get_geometry("entropy", ui)),
        GeomCase("tsallis-q0.5-halfline", get_geometry("tsallis:q=0.5", hl), clip_y=1.5),
        GeomCase("tsallis-q1.5-halfline", get_geometry("tsallis:q=1.5", hl)),
        GeomCase("tsallis-q0.5-interval", get_geometry("tsallis:q=0.5", ui)),
        GeomCase("tsallis-q1.5-interval", get_geometry("tsallis:q=1.5", ui)),
        GeomCase("sqrt-halfline", get_geometry("sqrt", hl), clip_y=0.4),
        GeomCase("hellinger-1d", get_geometry("hellinger", unit_ball(1))),
        GeomCase("entropy-simplex", get_geometry("entropy", simplex(3))),
        GeomCase("hellinger-ball", get_geometry("hellinger", unit_ball(2))),
        GeomCase("euclid-ball", get_geometry("euclidean", unit_ball(2))),
    ]


def sample_pairs(case: GeomCase, n: int, rng: np.random.Generator):
    """(p, x) samples with p in the domain, x in the prox-domain, both inside
    the region where the 1-strong-convexity contract holds."""
    g = case.g
    kind = g.domain.kind
    if g.is_scalar:
        if kind == "halfline":
            box = min(g.strong_convexity_box(), 1.0)
            p = rng.uniform(0.0, box, n)
            x = rng.uniform(1e-6, box, n)
        elif kind == "unitinterval":
            p = rng.uniform(0.0, 1.0, n)
            x = rng.uniform(1e-6, 1.0 - 1e-6, n)
        elif kind == "ball":
            p = rng.uniform(-1.0, 1.0, n)
            x = rng.uniform(-1.0 + 1e-6, 1.0 - 1e-6, n)
        else:
            p = rng.uniform(-1.0, 1.0, n)
            x = rng.uniform(-1.0, 1.0, n)
        if g.name == "euclidean":
            return p, x
        if g.name == "tsallis" and g.a > 1.0:
            return p, x
        # steep at the lower (or both) boundary: keep x in the open set
        return p, x
    d = g.domain.dim
    if kind == "simplex":
        p = rng.dirichlet(np.ones(d), n)
        x = rng.dirichlet(np.ones(d), n)
        x = np.maximum(x, 1e-9)
        x /= x.sum(axis=1, keepdims=True)
        return p, x
    # ball
    def ball(m, rmax):
        v = rng.standard_normal((m, d))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        r = rng.uniform(0, 1, (m, 1)) ** (1 / d) * rmax
        return v * r
    return ball(n, 1.0), ball(n, 1.0 - 1e-6)


def sample_steps(case: GeomCase, n: int, rng: np.random.Generator, scale: float = 1.0):
    g = case.g
    shape = (n,) if g.is_scalar else (n, g.domain.dim)
    y = rng.standard_normal(shape) * scale
    if case.clip_y:
        y = np.clip(y, -case.clip_y, case.clip_y)
    return y


def prox_many(g: GeometrySpec, xs, ys):
    if g.is_scalar:
        return K.batch_prox(g.code, g.a, xs, ys)
    return np.array([_vec_prox(g, x, y) for x, y in zip(xs, ys)])


def div_many(g: GeometrySpec, ps, xs):
    if g.is_scalar:
        return K.batch_div(g.code, g.a, ps, xs)
    return np.array([_vec_div(g, p, x) for p, x in zip(ps, xs)])


def grad_many(g: GeometrySpec, xs):
    if g.is_scalar:
        return K.batch_grad(g.code, g.a, xs)
    return np.array([_vec_grad(g, x) for x in xs])


def norms(g: GeometrySpec, vs):
    if g.is_scalar:
        return np.abs(vs)
    if g.domain.kind == "simplex":
        return np.abs(vs).sum(axis=1)
    return np.linalg.norm(vs, axis=1)


def dual_norms(g: GeometrySpec, ys):
    if g.is_scalar:
        return np.abs(ys)
    if g.domain.kind == "simplex":
        return np.abs(ys).max(axis=1)
    return np.linalg.norm(ys, axis=1)
