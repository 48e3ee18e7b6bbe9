"""Numerical verifiers for recursive-sequence bounds.

Three recursion families drive the rate analysis, here generated with
*equality* in place of the hypothesis inequality (the worst admissible case):

* ``linear``    a_{t+1} = (1 - q/(t+t0)^eta) a_t + q'/(t+t0)^(2 eta)
* ``power``     a_{t+1} = a_t - gamma_t a_t^(1+alpha) + q'/(t+t0)^(2 eta)
* ``puredecay`` a_{t+1} = a_t - gamma_t a_t^(1+alpha)

with gamma_t = q/(t+t0)^eta.  Each verifier checks the corresponding
closed-form bound at every index.  Values are clamped at zero (the bounds
concern non-negative sequences); a clamp beyond floating-point dust means the
equality recursion left the hypothesis class and the verifier reports it.

The linear-recursion bounds are asymptotic statements; the verifier enforces
slightly strengthened, pointwise-checkable hypotheses (an initialization cap
and an offset condition) under which the stationary envelope propagates
exactly.  The asymptotic constants themselves are tested separately.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ._accel import jit
from .errors import DomainError, PreconditionError

MODE_LINEAR = "linear"
MODE_POWER = "power"
MODE_PUREDECAY = "puredecay"

CHUNG_A1 = "ChungA1"
CHUNG_A4 = "ChungA4"
POLYAK_A3 = "PolyakA3"
POWER_HIGH_ETA = "A5"
POWER_LOW_ETA = "A6"

LEMMA_IDS = (CHUNG_A1, CHUNG_A4, POLYAK_A3, POWER_HIGH_ETA, POWER_LOW_ETA)

BOUND_TOL = 1e-12
_CLAMP_DUST = 1e-15


@dataclass(frozen=True)
class RecursionSpec:
    mode: str
    q: float
    qp: float = 0.0          # inhomogeneous coefficient q'
    eta: float = 1.0
    t0: float = 0.0
    alpha: float = 1.0
    a1: float = 1.0

    def __post_init__(self):
        if self.mode not in (MODE_LINEAR, MODE_POWER, MODE_PUREDECAY):
            raise DomainError(f"unknown recursion mode {self.mode!r}")
        if self.q <= 0.0 or self.qp < 0.0 or self.t0 < 0.0 or self.a1 < 0.0:
            raise DomainError("q must be positive; q', t0, a1 non-negative")
        if not 0.0 <= self.eta <= 1.0:
            raise DomainError("eta must lie in [0, 1]")
        if self.mode != MODE_LINEAR and self.alpha <= 0.0:
            raise DomainError("alpha must be positive")


def _rec_linear(q, qp, eta, t0, a1, out):
    x = a1
    out[0] = x
    clamps = 0
    for t in range(1, out.shape[0]):
        s = (t + t0) ** eta
        v = (1.0 - q / s) * x + qp / (s * s)
        if v < 0.0:
            if v < -_CLAMP_DUST:
                clamps += 1
            v = 0.0
        x = v
        out[t] = x
    return clamps


def _rec_power(q, qp, eta, t0, alpha, a1, out):
    x = a1
    out[0] = x
    clamps = 0
    for t in range(1, out.shape[0]):
        s = (t + t0) ** eta
        v = x - (q / s) * x ** (1.0 + alpha) + qp / (s * s)
        if v < 0.0:
            if v < -_CLAMP_DUST:
                clamps += 1
            v = 0.0
        x = v
        out[t] = x
    return clamps


rec_linear = jit(_rec_linear)
rec_power = jit(_rec_power)


def _iterate(spec: RecursionSpec, T: int):
    out = np.empty(T)
    if spec.mode == MODE_LINEAR:
        clamps = rec_linear(spec.q, spec.qp, spec.eta, spec.t0, spec.a1, out)
    elif spec.mode == MODE_POWER:
        clamps = rec_power(spec.q, spec.qp, spec.eta, spec.t0, spec.alpha, spec.a1, out)
    else:
        clamps = rec_power(spec.q, 0.0, spec.eta, spec.t0, spec.alpha, spec.a1, out)
    return out, clamps


def iterate_equality_recursion(spec: RecursionSpec, T: int) -> np.ndarray:
    """The sequence a_1..a_T generated by the equality recursion,
    clamped at zero from below."""
    if T < 2:
        raise PreconditionError("T must be at least 2")
    return _iterate(spec, T)[0]


def c_const(eta: float, alpha: float) -> float:
    """Two-branch step constant of the rate analysis.

    Returns ``(1-eta)/(1+alpha)^(1+1/alpha)`` when
    ``eta <= (1+alpha)/(1+2 alpha)`` and
    ``alpha ((1 - 2^-(1+alpha))/(1+alpha))^(1+1/alpha)`` otherwise.
    """
    if not 0.5 < eta <= 1.0:
        raise DomainError("eta must lie in (1/2, 1]")
    if alpha <= 0.0:
        raise DomainError("alpha must be positive")
    if eta <= (1.0 + alpha) / (1.0 + 2.0 * alpha):
        return (1.0 - eta) / (1.0 + alpha) ** (1.0 + 1.0 / alpha)
    return alpha * ((1.0 - 2.0 ** -(1.0 + alpha)) / (1.0 + alpha)) ** (1.0 + 1.0 / alpha)


def power_condition_constant(eta: float, alpha: float) -> float:
    """Admissible ceiling for q' q^(1/alpha) under which the power-recursion
    envelopes propagate.  For the low-eta branch this equals ``c_const``; for
    the high-eta branch the factor 2^(1-2 eta) (not 2^-(1+alpha)) is the one
    the envelope argument actually supports, which is strictly smaller.
    """
    if not 0.5 < eta <= 1.0:
        raise DomainError("eta must lie in (1/2, 1]")
    if alpha <= 0.0:
        raise DomainError("alpha must be positive")
    if eta <= (1.0 + alpha) / (1.0 + 2.0 * alpha):
        return (1.0 - eta) / (1.0 + alpha) ** (1.0 + 1.0 / alpha)
    return alpha * ((1.0 - 2.0 ** (1.0 - 2.0 * eta)) / (1.0 + alpha)) ** (1.0 + 1.0 / alpha)


def step_exponent_forms(beta: float) -> tuple[float, float]:
    """The step-size condition's exponent written both ways: ``2 + 1/alpha``
    with ``alpha = beta/(1-beta)``, and ``1 + 1/beta``.  They coincide."""
    if not 0.0 < beta < 1.0:
        raise DomainError("beta must lie in (0, 1)")
    alpha = beta / (1.0 - beta)
    return 2.0 + 1.0 / alpha, 1.0 + 1.0 / beta


def _cumsum_gamma(spec: RecursionSpec, T: int) -> np.ndarray:
    ts = np.arange(1, T, dtype=np.float64)
    return np.concatenate([[0.0], np.cumsum(spec.q / (ts + spec.t0) ** spec.eta)])


def _bound_chung_a1(spec: RecursionSpec, T: int) -> np.ndarray:
    tt = np.arange(1, T + 1, dtype=np.float64)
    return (spec.qp / (spec.q - 1.0)) / (tt + spec.t0)


def _bound_chung_a4(spec: RecursionSpec, T: int) -> np.ndarray:
    m = spec.qp / (spec.q - spec.eta * (1.0 + spec.t0) ** (spec.eta - 1.0))
    tt = np.arange(1, T + 1, dtype=np.float64)
    return m / (tt + spec.t0) ** spec.eta


def _bound_polyak(spec: RecursionSpec, T: int) -> np.ndarray:
    sg = _cumsum_gamma(spec, T)
    al = spec.alpha
    return spec.a1 / (1.0 + al * spec.a1 ** al * sg) ** (1.0 / al)


def _bound_power_high(spec: RecursionSpec, T: int) -> np.ndarray:
    al = spec.alpha
    b = ((1.0 - 2.0 ** (1.0 - 2.0 * spec.eta)) / ((1.0 + al) * spec.q)) ** (1.0 / al)
    sg = _cumsum_gamma(spec, T)
    s = spec.a1 + b
    return s / (1.0 + al * s ** al * 2.0 ** -al * sg) ** (1.0 / al)


def _bound_power_low(spec: RecursionSpec, T: int) -> np.ndarray:
    al = spec.alpha
    p = 1.0 + al
    sg = _cumsum_gamma(spec, T)
    tt = np.arange(1, T + 1, dtype=np.float64)
    head = spec.a1 / (1.0 + al * spec.a1 ** al * sg) ** (1.0 / al)
    # envelope exponent eta/(1+alpha): the comparison sequence decays at this
    # slower rate, and only this rate survives the induction
    tail = (p * spec.q) ** (-1.0 / al) / (tt + spec.t0) ** (spec.eta / p)
    return head + tail


def _check_hypotheses(lemma_id: str, spec: RecursionSpec) -> None:
    e = None
    if lemma_id == CHUNG_A1:
        if spec.mode != MODE_LINEAR or spec.eta != 1.0:
            e = "linear recursion with eta = 1 required"
        elif spec.q <= 1.0:
            e = "q > 1 required"
        elif 1.0 + spec.t0 < spec.q:
            e = "1 + t0 >= q required (non-negative contraction factor)"
        elif spec.a1 > spec.qp / ((spec.q - 1.0) * (1.0 + spec.t0)) + 1e-15:
            e = "a1 <= q'/((q-1)(1+t0)) required (inside the stationary envelope)"
    elif lemma_id == CHUNG_A4:
        if spec.mode != MODE_LINEAR or not 0.0 < spec.eta < 1.0:
            e = "linear recursion with 0 < eta < 1 required"
        elif spec.q <= spec.eta * (1.0 + spec.t0) ** (spec.eta - 1.0):
            e = "q > eta (1+t0)^(eta-1) required"
        elif (1.0 + spec.t0) ** spec.eta < spec.q:
            e = "(1+t0)^eta >= q required (non-negative contraction factor)"
        else:
            m = spec.qp / (spec.q - spec.eta * (1.0 + spec.t0) ** (spec.eta - 1.0))
            if spec.a1 > m / (1.0 + spec.t0) ** spec.eta + 1e-15:
                e = "a1 inside the stationary envelope required"
    elif lemma_id == POLYAK_A3:
        if spec.mode != MODE_PUREDECAY:
            e = "pure-decay recursion required"
        elif spec.q / (1.0 + spec.t0) ** spec.eta * spec.a1 ** spec.alpha > 1.0:
            e = "gamma_1 a1^alpha <= 1 required (equality recursion stays non-negative)"
    elif lemma_id == POWER_HIGH_ETA:
        bp = (1.0 + spec.alpha) / (1.0 + 2.0 * spec.alpha)
        if spec.mode != MODE_POWER:
            e = "power recursion required"
        elif not bp <= spec.eta <= 1.0:
            e = "(1+alpha)/(1+2 alpha) <= eta <= 1 required"
        elif spec.qp * spec.q ** (1.0 / spec.alpha) > power_condition_constant(
                spec.eta, spec.alpha) + 1e-15:
            e = "q' q^(1/alpha) above the admissible step constant"
    elif lemma_id == POWER_LOW_ETA:
        bp = (1.0 + spec.alpha) / (1.0 + 2.0 * spec.alpha)
        if spec.mode != MODE_POWER:
            e = "power recursion required"
        elif not 0.5 < spec.eta <= bp:
            e = "1/2 < eta <= (1+alpha)/(1+2 alpha) required"
        elif spec.qp * spec.q ** (1.0 / spec.alpha) > c_const(spec.eta, spec.alpha) + 1e-15:
            e = "q' q^(1/alpha) above the admissible step constant"
    else:
        raise DomainError(f"unknown lemma id {lemma_id!r}")
    if e is not None:
        raise PreconditionError(f"{lemma_id}: {e}")


_BOUNDS = {
    CHUNG_A1: _bound_chung_a1,
    CHUNG_A4: _bound_chung_a4,
    POLYAK_A3: _bound_polyak,
    POWER_HIGH_ETA: _bound_power_high,
    POWER_LOW_ETA: _bound_power_low,
}


@dataclass(frozen=True)
class LemmaBoundReport:
    lemma_id: str
    spec: RecursionSpec
    T: int
    worst_margin: float      # min over t of bound_t - a_t; negative = exceeded
    clamps: int

    @property
    def passed(self) -> bool:
        return self.worst_margin >= -BOUND_TOL and self.clamps == 0


def verify_lemma_bound(lemma_id: str, spec: RecursionSpec, T: int) -> LemmaBoundReport:
    """Generate the equality recursion and check its closed-form bound at
    every index up to T.  Raises :class:`PreconditionError` naming the first
    violated hypothesis."""
    _check_hypotheses(lemma_id, spec)
    seq, clamps = _iterate(spec, T)
    bound = _BOUNDS[lemma_id](spec, T)
    worst = float(np.min(bound - seq))
    return LemmaBoundReport(lemma_id, spec, T, worst, clamps)


def sample_spec(lemma_id: str, rng: np.random.Generator) -> RecursionSpec:
    """Random hypothesis-satisfying parameters for a lemma verifier.

    Initial values are capped so the equality recursion itself remains in the
    non-negative hypothesis class (no clamping).
    """
    t0 = rng.uniform(0.0, 10.0)
    if lemma_id == CHUNG_A1:
        t0 = rng.uniform(0.5, 10.0)
        q = rng.uniform(1.05, 1.0 + t0)
        qp = rng.uniform(0.01, 3.0)
        a1 = rng.uniform(0.0, qp / ((q - 1.0) * (1.0 + t0)))
        return RecursionSpec(MODE_LINEAR, q, qp, 1.0, t0, 1.0, a1)
    if lemma_id == CHUNG_A4:
        eta = rng.uniform(0.05, 0.95)
        lo = eta * (1.0 + t0) ** (eta - 1.0)
        hi = (1.0 + t0) ** eta
        q = rng.uniform(lo + 0.01, max(lo + 0.02, min(hi, lo + 3.0)))
        q = min(q, hi)
        qp = rng.uniform(0.01, 3.0)
        m = qp / (q - lo)
        a1 = rng.uniform(0.0, m / (1.0 + t0) ** eta)
        return RecursionSpec(MODE_LINEAR, q, qp, eta, t0, 1.0, a1)
    if lemma_id == POLYAK_A3:
        alpha = rng.uniform(0.3, 3.0)
        eta = rng.uniform(0.0, 1.0)
        q = rng.uniform(0.05, 3.0)
        g1 = q / (1.0 + t0) ** eta
        a1 = rng.uniform(0.0, (1.0 / g1) ** (1.0 / alpha))
        return RecursionSpec(MODE_PUREDECAY, q, 0.0, eta, t0, alpha, a1)
    if lemma_id in (POWER_HIGH_ETA, POWER_LOW_ETA):
        alpha = rng.uniform(0.3, 3.0)
        bp = (1.0 + alpha) / (1.0 + 2.0 * alpha)
        if lemma_id == POWER_HIGH_ETA:
            eta = rng.uniform(bp, 1.0)
        else:
            eta = rng.uniform(0.5 + 1e-6, bp)
        q = rng.uniform(0.05, 3.0)
        cmax = power_condition_constant(max(eta, 0.5 + 1e-9), alpha)
        qp = rng.uniform(0.0, 1.0) * cmax / q ** (1.0 / alpha)
        g1 = q / (1.0 + t0) ** eta
        a1 = rng.uniform(0.0, min((1.0 / ((1.0 + alpha) * g1)) ** (1.0 / alpha), 5.0))
        return RecursionSpec(MODE_POWER, q, qp, eta, t0, alpha, a1)
    raise DomainError(f"unknown lemma id {lemma_id!r}")


def run_lemma_suite(draws: int = 200, T: int = 10_000, seed: int = 0) -> list[LemmaBoundReport]:
    """The full 5-lemma random-draw suite; resamples specs whose equality
    recursion clamps (those leave the hypothesis class)."""
    rng = np.random.default_rng(seed)
    reports = []
    for lemma_id in LEMMA_IDS:
        n = 0
        while n < draws:
            spec = sample_spec(lemma_id, rng)
            rep = verify_lemma_bound(lemma_id, spec, T)
            if rep.clamps > 0:
                continue
            reports.append(rep)
            n += 1
    return reports
