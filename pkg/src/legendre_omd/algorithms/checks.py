"""Pathwise verification of the per-iteration descent inequality and
Monte-Carlo estimation of the stay-in-a-ball stability event.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import PreconditionError
from ..geometry import GeometrySpec, divergence
from ..problems import OracleSpec, ProblemSpec
from . import kernels as AK
from .omd import StepSchedule, Trajectory, checkpoints

DESCENT_TOL = 1e-9


@dataclass(frozen=True)
class DescentReport:
    iterations: int
    max_violation: float
    argmax_t: int

    @property
    def passed(self) -> bool:
        return self.max_violation <= DESCENT_TOL


def check_descent_inequality(traj: Trajectory, problem: ProblemSpec) -> DescentReport:
    """Evaluate, at every iteration, the recorded-path inequality

        D(x*, X_{t+1}) + phi_{t+1}
          <= D(x*, X_t) + (1 - gamma_t mu) phi_t
             - gamma_t <Y_{t+1/2}, X_{t+1/2} - x*>
             + (4 gamma_t^2 L^2 - 1/2) ||X_{t+1/2} - X_t||^2
             + 4 gamma_t^2 (||U_{t+1/2}||_*^2 + ||U_{t-1/2}||_*^2)

    which holds pathwise for the optimistic recursion whenever
    gamma_t <= 1/(4L).  Reports the maximum violation over the run.
    """
    if traj.method != "omd":
        raise PreconditionError("descent check applies to optimistic runs only")
    if not traj.full or traj.blew_up:
        raise PreconditionError("descent check needs a fully recorded, finite run")
    L, mu = problem.L, problem.mu
    if traj.gammas[0] > 1.0 / (4.0 * L) + 1e-15:
        raise PreconditionError(
            f"step size {traj.gammas[0]:g} exceeds 1/(4L) = {1.0 / (4.0 * L):g}")
    g = traj.geometry
    xstar = problem.xstar if g.domain.dim > 1 else float(problem.xstar[0])
    xstar_arr = np.atleast_1d(problem.xstar)
    worst = -np.inf
    argmax = 0
    for t in range(1, traj.T + 1):
        gam = traj.gammas[t - 1]
        d_now = traj.d[t - 1]
        d_next = traj.d[t]
        xlead = np.atleast_1d(traj.x_lead[t - 1])
        xbase = np.atleast_1d(traj.x[t - 1])
        y = np.atleast_1d(traj.y[t])
        u = np.atleast_1d(traj.u[t])
        u_prev = np.atleast_1d(traj.u[t - 1])
        lhs = d_next + traj.phi[t]
        rhs = (d_now + (1.0 - gam * mu) * traj.phi[t - 1]
               - gam * float(y @ (xlead - xstar_arr))
               + (4.0 * gam * gam * L * L - 0.5) * g.norm(xlead - xbase) ** 2
               + 4.0 * gam * gam * (g.dual_norm(u) ** 2 + g.dual_norm(u_prev) ** 2))
        v = lhs - rhs
        if v > worst:
            worst = v
            argmax = t
    return DescentReport(traj.T, float(worst), argmax)


@dataclass(frozen=True)
class StabilityReport:
    radius: float
    trials: int
    escapes: int
    analytic_lower_bound: float
    gamma_sq_sum: float
    rho_sq: float

    @property
    def escape_frequency(self) -> float:
        return self.escapes / self.trials

    @property
    def stay_frequency(self) -> float:
        return 1.0 - self.escape_frequency


def stability_lower_bound(r: float, sigma2: float, gamma_sq_sum: float) -> float:
    """Analytic lower bound on the stay probability:
    1 - 9 (8 + r^2) sigma^2 G / (r^2 min(1, r^2/9))  with G the sum of
    squared steps."""
    return 1.0 - 9.0 * (8.0 + r * r) * sigma2 * gamma_sq_sum / (
        r * r * min(1.0, r * r / 9.0))


def estimate_stability(problem: ProblemSpec, geometry: GeometrySpec,
                       schedule: StepSchedule, oracle: OracleSpec, r: float,
                       x_init, T: int, trials: int) -> StabilityReport:
    """Empirical frequency of the event that every state from the initial
    leading state on stays inside the radius-r ball around the solution.

    Requires the initialization condition D(x*, x_init) <= 2 r^2 / 9 (the
    optimism term vanishes under the coupled initialization) and at least
    100 trials.  Blow-ups count as escapes.
    """
    if trials < 100:
        raise PreconditionError("need at least 100 trials")
    if not (geometry.is_scalar and problem.is_scalar):
        raise PreconditionError("stability estimation is implemented for 1-d problems")
    xstar = float(problem.xstar[0])
    d0 = divergence(geometry, xstar, x_init)
    if d0 > 2.0 * r * r / 9.0 + 1e-15:
        raise PreconditionError(
            f"initialization too far: D(x*, x_init) = {d0:g} > 2 r^2 / 9 = {2 * r * r / 9:g}")
    gammas = schedule.values(T)
    checks = checkpoints(T)
    out_d = np.empty(len(checks))
    codes = np.arange(1, 2 * T + 2, 2, dtype=np.uint64)
    escapes = 0
    for i in range(trials):
        o = oracle.for_trial(i)
        noise = o.noise_block(codes, 1)
        _, esc = AK.omd_scalar_curve(geometry.code, geometry.a,
                                     problem.params[0], xstar, gammas, noise,
                                     float(x_init), 1e9, r, checks, out_d)
        if esc > 0:
            escapes += 1
    gss = schedule.gamma_sq_sum()
    if schedule.t0 > 0.0:
        rho_sq = oracle.sigma2 * schedule.gamma_sq_sum_bound()
    else:
        rho_sq = np.inf
    return StabilityReport(
        radius=r, trials=trials, escapes=escapes,
        analytic_lower_bound=stability_lower_bound(r, oracle.sigma2, gss),
        gamma_sq_sum=gss, rho_sq=rho_sq)
