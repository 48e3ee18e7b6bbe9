"""Scalar geometry kernels.

Every one-dimensional regularizer/domain pairing is encoded as an integer so
the functions below stay jit-compilable.  All closed forms operate on plain
floats; an unbounded prox step returns ``inf`` and callers turn it into an
exception or a blow-up flag.

Steep geometries floor their iterates at 1e-300 to avoid denormal underflow.
"""
from __future__ import annotations

import math

import numpy as np

from .._accel import jit

EUCLID_FULL = 0
EUCLID_HALF = 1
EUCLID_UNIT = 2
EUCLID_BALL1 = 3      # euclidean on [-1, 1]
ENTROPY_HALF = 4
ENTROPY_UNIT = 5
TSALLIS_HALF = 6
TSALLIS_UNIT = 7
FRACPOW_HALF = 8      # includes the square-root regularizer (power 0.5)
HELLINGER_1D = 9

_FLOOR = 1e-300
_ONE_MINUS = 1.0 - 1e-15

BISECT_EPS = 1e-15
BISECT_TOL = 1e-15   # width target; tighter than the 1e-12 contract so the
BISECT_MAXIT = 200   # first-order residual stays small near steep boundaries


def _h_scalar(code: int, a: float, x: float) -> float:
    if code <= EUCLID_BALL1:
        return 0.5 * x * x
    if code == ENTROPY_HALF:
        return 0.0 if x <= 0.0 else x * math.log(x)
    if code == ENTROPY_UNIT:
        s = 0.0
        if x > 0.0:
            s += x * math.log(x)
        if x < 1.0:
            s += (1.0 - x) * math.log(1.0 - x)
        return s
    if code == TSALLIS_HALF:
        q = a
        return -(x ** q) / (q * (1.0 - q))
    if code == TSALLIS_UNIT:
        q = a
        return -(x ** q + (1.0 - x) ** q) / (q * (1.0 - q))
    if code == FRACPOW_HALF:
        p = a
        return (p * x - x ** p) / (1.0 - p)
    # Hellinger
    return -math.sqrt(1.0 - x * x)


def _grad_scalar(code: int, a: float, x: float) -> float:
    if code <= EUCLID_BALL1:
        return x
    if code == ENTROPY_HALF:
        return 1.0 + math.log(x)
    if code == ENTROPY_UNIT:
        return math.log(x) - math.log(1.0 - x)
    if code == TSALLIS_HALF:
        q = a
        return x ** (q - 1.0) / (q - 1.0)
    if code == TSALLIS_UNIT:
        q = a
        return (x ** (q - 1.0) - (1.0 - x) ** (q - 1.0)) / (q - 1.0)
    if code == FRACPOW_HALF:
        p = a
        return p / (1.0 - p) * (1.0 - x ** (p - 1.0))
    return x / math.sqrt(1.0 - x * x)


h_scalar = jit(_h_scalar)
grad_scalar = jit(_grad_scalar)


def _div_scalar(code: int, a: float, p: float, x: float) -> float:
    if code <= EUCLID_BALL1:
        d = p - x
        return 0.5 * d * d
    if code == ENTROPY_HALF:
        t = 0.0 if p == 0.0 else p * math.log(p / x)
        return t + x - p
    if code == ENTROPY_UNIT:
        t = 0.0 if p == 0.0 else p * math.log(p / x)
        if p < 1.0:
            t += (1.0 - p) * math.log((1.0 - p) / (1.0 - x))
        return t
    # h(p) - h(x) - h'(x)(p - x) for the remaining closed forms
    return h_scalar(code, a, p) - h_scalar(code, a, x) - grad_scalar(code, a, x) * (p - x)


div_scalar = jit(_div_scalar)


def _prox_tsallis_unit(q: float, x: float, y: float) -> float:
    # bisection on the monotone first-order condition h'(z) = h'(x) + y
    w0 = (x ** (q - 1.0) - (1.0 - x) ** (q - 1.0)) / (q - 1.0) + y
    if q > 1.0:
        # gradient is bounded: the minimizer may sit on the boundary
        if w0 <= -1.0 / (q - 1.0):
            return 0.0
        if w0 >= 1.0 / (q - 1.0):
            return 1.0
    lo = BISECT_EPS
    hi = 1.0 - BISECT_EPS
    flo = (lo ** (q - 1.0) - (1.0 - lo) ** (q - 1.0)) / (q - 1.0) - w0
    fhi = (hi ** (q - 1.0) - (1.0 - hi) ** (q - 1.0)) / (q - 1.0) - w0
    if flo >= 0.0:
        return lo
    if fhi <= 0.0:
        return hi
    for _ in range(BISECT_MAXIT):
        mid = 0.5 * (lo + hi)
        fm = (mid ** (q - 1.0) - (1.0 - mid) ** (q - 1.0)) / (q - 1.0) - w0
        if fm < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < BISECT_TOL:
            break
    return 0.5 * (lo + hi)


prox_tsallis_unit = jit(_prox_tsallis_unit)


def _prox_scalar(code: int, a: float, x: float, y: float) -> float:
    if code == EUCLID_FULL:
        return x + y
    if code == EUCLID_HALF:
        r = x + y
        return r if r > 0.0 else 0.0
    if code == EUCLID_UNIT:
        r = x + y
        if r < 0.0:
            return 0.0
        return r if r < 1.0 else 1.0
    if code == EUCLID_BALL1:
        r = x + y
        if r < -1.0:
            return -1.0
        return r if r < 1.0 else 1.0
    if code == ENTROPY_HALF:
        t = math.log(x) + y
        if t < -690.0:
            return _FLOOR
        if t > 709.0:
            return math.inf
        return math.exp(t)
    if code == ENTROPY_UNIT:
        z = math.log(x) - math.log(1.0 - x) + y
        if z >= 0.0:
            r = 1.0 / (1.0 + math.exp(-z if z < 709.0 else 709.0))
        else:
            e = math.exp(z if z > -709.0 else -709.0)
            r = e / (1.0 + e)
        if r < _FLOOR:
            return _FLOOR
        return r if r < _ONE_MINUS else _ONE_MINUS
    if code == TSALLIS_HALF:
        q = a
        w = x ** (q - 1.0) + (q - 1.0) * y
        if q > 1.0:
            if w <= 0.0:
                return 0.0
            return w ** (1.0 / (q - 1.0))
        if w <= 0.0:
            return math.inf  # dual step above the sup of the gradient: unbounded
        r = w ** (1.0 / (q - 1.0))
        return r if r > _FLOOR else _FLOOR
    if code == TSALLIS_UNIT:
        return prox_tsallis_unit(a, x, y)
    if code == FRACPOW_HALF:
        p = a
        w = x ** (p - 1.0) - y * (1.0 - p) / p
        if w <= 0.0:
            return math.inf
        r = w ** (1.0 / (p - 1.0))
        return r if r > _FLOOR else _FLOOR
    # Hellinger on [-1, 1]
    w = x / math.sqrt(1.0 - x * x) + y
    if w > 1e8:
        return _ONE_MINUS
    if w < -1e8:
        return -_ONE_MINUS
    r = w / math.sqrt(1.0 + w * w)
    if r > _ONE_MINUS:
        return _ONE_MINUS
    if r < -_ONE_MINUS:
        return -_ONE_MINUS
    return r


prox_scalar = jit(_prox_scalar)


def _h_batch(code, a, xs, out):
    for i in range(xs.shape[0]):
        out[i] = h_scalar(code, a, xs[i])


def _grad_batch(code, a, xs, out):
    for i in range(xs.shape[0]):
        out[i] = grad_scalar(code, a, xs[i])


def _div_batch(code, a, ps, xs, out):
    for i in range(xs.shape[0]):
        out[i] = div_scalar(code, a, ps[i], xs[i])


def _prox_batch(code, a, xs, ys, out):
    for i in range(xs.shape[0]):
        out[i] = prox_scalar(code, a, xs[i], ys[i])


h_batch = jit(_h_batch)
grad_batch = jit(_grad_batch)
div_batch = jit(_div_batch)
prox_batch = jit(_prox_batch)


def batch_h(code: int, a: float, xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=np.float64)
    out = np.empty(len(xs))
    h_batch(code, a, xs, out)
    return out


def batch_grad(code: int, a: float, xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=np.float64)
    out = np.empty(len(xs))
    grad_batch(code, a, xs, out)
    return out


def batch_div(code: int, a: float, ps, xs) -> np.ndarray:
    ps = np.asarray(ps, dtype=np.float64)
    xs = np.asarray(xs, dtype=np.float64)
    out = np.empty(len(xs))
    div_batch(code, a, ps, xs, out)
    return out


def batch_prox(code: int, a: float, xs, ys) -> np.ndarray:
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    out = np.empty(len(xs))
    prox_batch(code, a, xs, ys, out)
    return out
