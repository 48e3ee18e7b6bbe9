"""Optimistic mirror descent and the deterministic mirror-prox variant.

The optimistic recursion keeps a base state and a leading state and reuses
the previous leading-state signal instead of a second oracle query:

    X_{t+1/2} = prox(X_t, -gamma_t * Y_{t-1/2})
    X_{t+1}   = prox(X_t, -gamma_t * Y_{t+1/2})

with one oracle query per iteration (at the leading state) plus a single
bootstrap query at X_{1/2} = X_1.  Mirror-prox queries the exact field twice
per iteration and runs with a constant step.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from ..domains import Domain
from ..errors import (DivergenceError, DomainError, NumericalError,
                      PreconditionError, ProxDomainError)
from ..geometry import GeometrySpec, divergence, prox
from ..problems import OracleSpec, ProblemSpec, eval_field, oracle_none
from . import kernels as AK

BLOWUP_THRESHOLD = 1e9
FULL_RECORD_MAX_T = 1_000_000
_THIN_FACTOR = 1.05


@dataclass(frozen=True)
class StepSchedule:
    """Power-law step size gamma_t = gamma / (t + t0)^eta."""
    gamma: float
    t0: float = 0.0
    eta: float = 1.0

    def __post_init__(self):
        if self.gamma <= 0.0:
            raise DomainError("gamma must be positive")
        if self.t0 < 0.0:
            raise DomainError("t0 must be non-negative")
        if not 0.5 < self.eta <= 1.0:
            raise DomainError("eta must lie in (1/2, 1]")

    def at(self, t: int) -> float:
        return self.gamma / (t + self.t0) ** self.eta

    def values(self, T: int) -> np.ndarray:
        t = np.arange(1, T + 1, dtype=np.float64)
        return self.gamma / (t + self.t0) ** self.eta

    def gamma_sq_sum(self, terms: int = 1_000_000) -> float:
        """Upper estimate of the (finite) sum of squared steps: partial sum
        plus an integral tail bound."""
        t = np.arange(1, terms + 1, dtype=np.float64)
        partial = float(np.sum((self.gamma / (t + self.t0) ** self.eta) ** 2))
        tail = self.gamma ** 2 * (terms + self.t0) ** (1.0 - 2.0 * self.eta) / (2.0 * self.eta - 1.0)
        return partial + tail

    def gamma_sq_sum_bound(self) -> float:
        """Closed-form bound gamma^2 t0^(1-2 eta) / (2 eta - 1); needs t0 > 0."""
        if self.t0 <= 0.0:
            return np.inf
        return self.gamma ** 2 * self.t0 ** (1.0 - 2.0 * self.eta) / (2.0 * self.eta - 1.0)


@dataclass
class Trajectory:
    """Record of one run: base/leading states, signals, noise, divergences.

    ``t`` holds the recorded base-state indices (1..T+1 when fully recorded;
    a geometrically thinned subset for very long runs).  ``y[0]``/``u[0]``
    belong to the bootstrap query at the initial leading state; ``y[k]`` is
    the signal at leading state k+1/2.  ``phi[k]`` is the optimism term of
    stage k+1 (phi of stage 1 is zero under the coupled initialization).
    """
    method: str
    geometry: GeometrySpec
    problem: ProblemSpec
    oracle: OracleSpec
    T: int
    t: np.ndarray
    x: np.ndarray
    d: np.ndarray
    gammas: np.ndarray
    x_init: object
    blowup_t: int = 0
    x_lead: np.ndarray | None = None
    y: np.ndarray | None = None
    u: np.ndarray | None = None
    phi: np.ndarray | None = None
    config_hash: str = ""
    seed: int = 0

    @property
    def full(self) -> bool:
        return self.x_lead is not None

    @property
    def blew_up(self) -> bool:
        return self.blowup_t > 0

    def recompute_divergence(self) -> np.ndarray:
        xstar = self.problem.xstar if self.geometry.domain.dim > 1 else float(self.problem.xstar[0])
        out = np.empty(len(self.t))
        for i in range(len(self.t)):
            xi = self.x[i]
            out[i] = np.nan if np.any(np.isnan(np.atleast_1d(xi))) else divergence(
                self.geometry, xstar, xi)
        return out

    def write_csv(self, path) -> None:
        """Columns t, X (semicolon-joined coordinates), D, phi."""
        with open(path, "w", encoding="utf-8") as f:
            f.write(f"# config {self.config_hash}\n")
            f.write("t,X,D,phi\n")
            for i, t in enumerate(self.t):
                xi = np.atleast_1d(self.x[i])
                xs = ";".join(f"{v:.17g}" for v in xi)
                ph = self.phi[t - 1] if (self.phi is not None and t - 1 < len(self.phi)) else np.nan
                f.write(f"{t},{xs},{self.d[i]:.17g},{ph:.17g}\n")


def config_digest(parts: dict) -> str:
    text = "\n".join(f"{k}={parts[k]}" for k in sorted(parts))
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def _thinned_checkpoints(T: int) -> np.ndarray:
    pts = [1]
    v = 1.0
    while pts[-1] < T + 1:
        v = max(v * _THIN_FACTOR, v + 1.0)
        pts.append(min(int(np.ceil(v)), T + 1))
    return np.unique(np.asarray(pts, dtype=np.int64))


def checkpoints(T: int) -> np.ndarray:
    """Recorded base-state indices: everything up to 10^6 steps, then a
    geometric grid (ratio 1.05)."""
    if T <= FULL_RECORD_MAX_T:
        return np.arange(1, T + 2, dtype=np.int64)
    return _thinned_checkpoints(T)


def _oracle_codes(T: int) -> np.ndarray:
    # query step indices 1/2, 3/2, ..., T+1/2  ->  codes 1, 3, ..., 2T+1
    return np.arange(1, 2 * T + 2, 2, dtype=np.uint64)


def _validate_run(problem: ProblemSpec, geometry: GeometrySpec, T: int, x_init) -> None:
    if geometry.domain != problem.domain:
        raise DomainError(
            f"geometry domain {geometry.domain} differs from problem domain {problem.domain}")
    if T < 2:
        raise PreconditionError("T must be at least 2")
    if not geometry.in_prox_domain(x_init):
        raise ProxDomainError(f"x_init {x_init!r} outside prox-domain of {geometry.key}")


def _phi_from_signals(geometry: GeometrySpec, gammas: np.ndarray, y: np.ndarray) -> np.ndarray:
    T = len(gammas)
    phi = np.zeros(T + 1)
    for t in range(1, T + 1):
        dy = np.atleast_1d(y[t]) - np.atleast_1d(y[t - 1])
        phi[t] = 0.5 * gammas[t - 1] ** 2 * geometry.dual_norm(dy) ** 2
    return phi


def run_omd(problem: ProblemSpec, geometry: GeometrySpec, schedule: StepSchedule,
            oracle: OracleSpec, T: int, x_init, *,
            blowup: float = BLOWUP_THRESHOLD, raise_on_blowup: bool = True) -> Trajectory:
    """Run optimistic mirror descent for T iterations from X_1 = X_{1/2} = x_init."""
    _validate_run(problem, geometry, T, x_init)
    gammas = schedule.values(T)
    codes = _oracle_codes(T)
    noise = oracle.noise_block(codes, problem.domain.dim)
    digest = config_digest({
        "method": "omd", "problem": problem.key, "geometry": geometry.key,
        "domain": f"{problem.domain.kind}:{problem.domain.dim}",
        "gamma": schedule.gamma, "t0": schedule.t0, "eta": schedule.eta,
        "sigma2": oracle.sigma2, "seed": oracle.seed, "T": T, "x_init": x_init,
    })

    if geometry.is_scalar and problem.is_scalar and T <= FULL_RECORD_MAX_T:
        lam = problem.params[0]
        xstar = float(problem.xstar[0])
        xb = np.empty(T + 1)
        xl = np.empty(T)
        ys = np.empty(T + 1)
        dd = np.empty(T + 1)
        bt = AK.omd_scalar_full(geometry.code, geometry.a, lam, xstar, gammas,
                                noise, float(x_init), blowup, xb, xl, ys, dd)
        traj = Trajectory(
            method="omd", geometry=geometry, problem=problem, oracle=oracle,
            T=T, t=np.arange(1, T + 2, dtype=np.int64), x=xb, d=dd,
            gammas=gammas, x_init=x_init, blowup_t=int(bt), x_lead=xl, y=ys,
            u=noise, phi=_phi_from_signals(geometry, gammas, ys),
            config_hash=digest, seed=oracle.seed)
    else:
        traj = _run_omd_generic(problem, geometry, oracle, gammas, noise, T,
                                x_init, blowup, digest)
    if traj.blew_up and raise_on_blowup:
        raise DivergenceError(
            f"divergence exceeded {blowup:g} at iteration {traj.blowup_t}")
    return traj


def _run_omd_generic(problem, geometry, oracle, gammas, noise, T, x_init, blowup, digest):
    checks = checkpoints(T)
    full = T <= FULL_RECORD_MAX_T
    dim = problem.domain.dim
    xstar = problem.xstar if dim > 1 else float(problem.xstar[0])
    x = np.asarray(x_init, dtype=np.float64) if dim > 1 else float(x_init)

    n_rec = len(checks)
    xs = np.full((n_rec, dim) if dim > 1 else n_rec, np.nan)
    ds = np.full(n_rec, np.nan)
    xl = np.full((T, dim) if dim > 1 else T, np.nan) if full else None
    ys = np.full((T + 1, dim) if dim > 1 else T + 1, np.nan) if full else None

    y_prev = eval_field(problem, x) + noise[0]
    if full:
        ys[0] = y_prev
    ci = 0
    if checks[ci] == 1:
        xs[ci] = x
        ds[ci] = divergence(geometry, xstar, x)
        ci += 1
    bt = 0
    for t in range(1, T + 1):
        g = gammas[t - 1]
        try:
            xlead = prox(geometry, x, -g * np.asarray(y_prev))
            y = eval_field(problem, xlead) + noise[t]
            xn = prox(geometry, x, -g * np.asarray(y))
        except NumericalError:
            bt = t
            break
        d = divergence(geometry, xstar, xn)
        if not d <= blowup:
            bt = t
            break
        if full:
            xl[t - 1] = xlead
            ys[t] = y
        x, y_prev = xn, y
        if ci < n_rec and checks[ci] == t + 1:
            xs[ci] = x
            ds[ci] = d
            ci += 1
    phi = _phi_from_signals(geometry, gammas, ys) if full else None
    return Trajectory(
        method="omd", geometry=geometry, problem=problem, oracle=oracle,
        T=T, t=checks, x=xs, d=ds, gammas=gammas, x_init=x_init,
        blowup_t=int(bt), x_lead=xl, y=ys, u=noise if full else None, phi=phi,
        config_hash=digest, seed=oracle.seed)


def run_mirror_prox(problem: ProblemSpec, geometry: GeometrySpec, gamma: float,
                    T: int, x_init, *, blowup: float = BLOWUP_THRESHOLD,
                    raise_on_blowup: bool = True) -> Trajectory:
    """Deterministic extra-gradient run with a constant step: a fresh field
    evaluation at the leading state every iteration (two per step)."""
    _validate_run(problem, geometry, T, x_init)
    if gamma <= 0.0:
        raise DomainError("gamma must be positive")
    digest = config_digest({
        "method": "mirror-prox", "problem": problem.key, "geometry": geometry.key,
        "domain": f"{problem.domain.kind}:{problem.domain.dim}",
        "gamma": gamma, "T": T, "x_init": x_init,
    })
    gammas = np.full(T, gamma)

    if geometry.is_scalar and problem.is_scalar:
        lam = problem.params[0]
        xstar = float(problem.xstar[0])
        if T <= FULL_RECORD_MAX_T:
            xb = np.empty(T + 1)
            xl = np.empty(T)
            ys = np.empty(T + 1)
            dd = np.empty(T + 1)
            bt = AK.mp_scalar_full(geometry.code, geometry.a, lam, xstar, gamma,
                                   float(x_init), blowup, xb, xl, ys, dd)
            traj = Trajectory(
                method="mirror-prox", geometry=geometry, problem=problem,
                oracle=oracle_none(), T=T, t=np.arange(1, T + 2, dtype=np.int64),
                x=xb, d=dd, gammas=gammas, x_init=x_init, blowup_t=int(bt),
                x_lead=xl, y=ys, u=np.zeros(T + 1),
                phi=_phi_from_signals(geometry, gammas, ys),
                config_hash=digest, seed=0)
        else:
            checks = checkpoints(T)
            out_d = np.empty(len(checks))
            bt = AK.mp_scalar_curve(geometry.code, geometry.a, lam, xstar, gamma,
                                    T, float(x_init), blowup, checks, out_d)
            # states at checkpoints are not retained in thinned mode
            traj = Trajectory(
                method="mirror-prox", geometry=geometry, problem=problem,
                oracle=oracle_none(), T=T, t=checks,
                x=np.full(len(checks), np.nan), d=out_d, gammas=gammas,
                x_init=x_init, blowup_t=int(bt), config_hash=digest, seed=0)
    else:
        traj = _run_mp_generic(problem, geometry, gamma, gammas, T, x_init,
                               blowup, digest)
    if traj.blew_up and raise_on_blowup:
        raise DivergenceError(
            f"divergence exceeded {blowup:g} at iteration {traj.blowup_t}")
    return traj


def _run_mp_generic(problem, geometry, gamma, gammas, T, x_init, blowup, digest):
    checks = checkpoints(T)
    full = T <= FULL_RECORD_MAX_T
    dim = problem.domain.dim
    xstar = problem.xstar if dim > 1 else float(problem.xstar[0])
    x = np.asarray(x_init, dtype=np.float64) if dim > 1 else float(x_init)
    n_rec = len(checks)
    xs = np.full((n_rec, dim) if dim > 1 else n_rec, np.nan)
    ds = np.full(n_rec, np.nan)
    xl = np.full((T, dim) if dim > 1 else T, np.nan) if full else None
    ys = np.full((T + 1, dim) if dim > 1 else T + 1, np.nan) if full else None
    if full:
        ys[0] = eval_field(problem, x)
    ci = 0
    if checks[ci] == 1:
        xs[ci] = x
        ds[ci] = divergence(geometry, xstar, x)
        ci += 1
    bt = 0
    for t in range(1, T + 1):
        try:
            xlead = prox(geometry, x, -gamma * np.asarray(eval_field(problem, x)))
            y = eval_field(problem, xlead)
            xn = prox(geometry, x, -gamma * np.asarray(y))
        except NumericalError:
            bt = t
            break
        d = divergence(geometry, xstar, xn)
        if not d <= blowup:
            bt = t
            break
        if full:
            xl[t - 1] = xlead
            ys[t] = y
        x = xn
        if ci < n_rec and checks[ci] == t + 1:
            xs[ci] = x
            ds[ci] = d
            ci += 1
    phi = _phi_from_signals(geometry, gammas, ys) if (full and bt == 0) else None
    return Trajectory(
        method="mirror-prox", geometry=geometry, problem=problem,
        oracle=oracle_none(), T=T, t=checks, x=xs, d=ds, gammas=gammas,
        x_init=x_init, blowup_t=int(bt), x_lead=xl, y=ys,
        u=np.zeros_like(ys) if full else None, phi=phi,
        config_hash=digest, seed=0)
