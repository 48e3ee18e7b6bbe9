"""Experiment harness: averaged divergence curves, power-law rate fits, and
the canned rate tables comparing observed to predicted exponents.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .algorithms import StepSchedule, checkpoints, config_digest
from .algorithms import kernels as AK
from .domains import Domain, get_domain, half_line
from .errors import (ConfigError, DomainError, InsufficientDataError,
                     NonPositiveValuesError, PreconditionError)
from .geometry import GeometrySpec, get_geometry, legendre_exponent
from .problems import OracleSpec, ProblemSpec, get_problem, oracle_gaussian, oracle_none

DEFAULT_SEED = 2024
DEFAULT_T = 100_000
DEFAULT_TRIALS = 100
DEFAULT_SIGMA2 = 1e-4
DEFAULT_X_INIT = 0.1


def master_seed(default: int = DEFAULT_SEED) -> int:
    """Master seed; the LEGENDRE_OMD_SEED environment variable overrides."""
    env = os.environ.get("LEGENDRE_OMD_SEED", "")
    return int(env) if env else default


@dataclass(frozen=True)
class ExperimentConfig:
    geometry: str = "euclidean"
    problem: str = "linear1d:lambda=1"
    domain: str = "halfline"
    gamma: float = 1.0
    t0: float = 0.0
    eta: float = 1.0
    sigma2: float = DEFAULT_SIGMA2
    T: int = DEFAULT_T
    trials: int = DEFAULT_TRIALS
    x_init: float = DEFAULT_X_INIT
    t_lo: int = 0            # 0 -> default window max(10, T/100)
    t_hi: int = 0            # 0 -> T
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.T < 2:
            raise ConfigError("T must be >= 2")
        if self.t_lo and self.t_lo < 10:
            raise ConfigError("t_lo must be >= 10")
        if self.t_hi and self.t_hi > self.T:
            raise ConfigError("t_hi must be <= T")

    @property
    def window(self) -> tuple[int, int]:
        lo = self.t_lo if self.t_lo else max(10, self.T // 100)
        hi = self.t_hi if self.t_hi else self.T
        return lo, hi

    def resolve(self) -> tuple[ProblemSpec, GeometrySpec, StepSchedule, OracleSpec]:
        dom = get_domain(self.domain)
        problem = get_problem(self.problem, dom)
        geometry = get_geometry(self.geometry, dom)
        schedule = StepSchedule(self.gamma, self.t0, self.eta)
        oracle = (oracle_gaussian(self.sigma2, self.seed) if self.sigma2 > 0.0
                  else replace(oracle_none(), seed=self.seed))
        return problem, geometry, schedule, oracle

    @property
    def digest(self) -> str:
        return config_digest({
            "geometry": self.geometry, "problem": self.problem,
            "domain": self.domain, "gamma": self.gamma, "t0": self.t0,
            "eta": self.eta, "sigma2": self.sigma2, "T": self.T,
            "trials": self.trials, "x_init": self.x_init,
            "window": self.window, "seed": self.seed,
        })


@dataclass(frozen=True)
class Curve:
    """Averaged divergence curve: t -> mean D(x*, X_t) with standard errors."""
    t: np.ndarray
    mean_d: np.ndarray
    stderr: np.ndarray
    trials_used: int
    blowups: int
    config: ExperimentConfig

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(f"# config {self.config.digest}\n")
            f.write("t,mean_D,stderr\n")
            for t, m, s in zip(self.t, self.mean_d, self.stderr):
                f.write(f"{t},{m:.17g},{s:.17g}\n")


def run_trials(cfg: ExperimentConfig, threads: int | None = None) -> Curve:
    """Pointwise mean of D(x*, X_t) over independent trials.

    Trials use independent counter-based substreams and may run on a thread
    pool (the hot kernels release the GIL); the reduction always happens in
    trial order, so results are independent of scheduling.  Blown-up trials
    are excluded from the averages and counted.
    """
    problem, geometry, schedule, oracle = cfg.resolve()
    if not (problem.is_scalar and geometry.is_scalar):
        raise ConfigError("the trial runner drives one-dimensional problems")
    if not geometry.in_prox_domain(cfg.x_init):
        raise ConfigError(f"x_init {cfg.x_init} outside prox-domain of {geometry.key}")
    T = cfg.T
    checks = checkpoints(T)
    gammas = schedule.values(T)
    codes = np.arange(1, 2 * T + 2, 2, dtype=np.uint64)
    lam = problem.params[0]
    xstar = float(problem.xstar[0])
    curves = np.empty((cfg.trials, len(checks)))
    blew = np.zeros(cfg.trials, dtype=bool)

    def one(i: int) -> None:
        o = oracle.for_trial(i)
        noise = o.noise_block(codes, 1)
        out = curves[i]
        bt, _ = AK.omd_scalar_curve(geometry.code, geometry.a, lam, xstar,
                                    gammas, noise, float(cfg.x_init), 1e9,
                                    -1.0, checks, out)
        blew[i] = bt > 0

    n_workers = threads if threads else 1
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as ex:
            list(ex.map(one, range(cfg.trials)))
    else:
        for i in range(cfg.trials):
            one(i)

    ok = ~blew
    used = int(ok.sum())
    if used == 0:
        raise PreconditionError("every trial blew up; nothing to average")
    sel = curves[ok]
    mean = sel.mean(axis=0)
    if used > 1:
        stderr = sel.std(axis=0, ddof=1) / math.sqrt(used)
    else:
        stderr = np.zeros_like(mean)
    return Curve(checks.astype(np.int64), mean, stderr, used, int(blew.sum()), cfg)


@dataclass(frozen=True)
class RateEstimate:
    nu: float                # decay exponent: D ~ t^-nu
    intercept: float
    r2: float
    window: tuple[int, int]
    points: int
    trials_used: int = 0


def estimate_rate(t, values, window: tuple[int, int], trials_used: int = 0) -> RateEstimate:
    """Ordinary least squares of log(values) on log(t) inside the window;
    the reported exponent is minus the slope."""
    t = np.asarray(t, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    lo, hi = window
    m = (t >= lo) & (t <= hi)
    if np.any(~np.isfinite(values[m])) or np.any(values[m] <= 0.0):
        raise NonPositiveValuesError("window contains non-positive or invalid values")
    if m.sum() < 20:
        raise InsufficientDataError(f"need >= 20 points in window, got {int(m.sum())}")
    lt = np.log(t[m])
    lv = np.log(values[m])
    A = np.vstack([lt, np.ones_like(lt)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, lv, rcond=None)
    resid = lv - (slope * lt + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(np.sum((lv - lv.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return RateEstimate(float(-slope), float(intercept), float(r2),
                        (int(lo), int(hi)), int(m.sum()), trials_used)


@dataclass(frozen=True)
class RatePrediction:
    nu: float                    # power-law exponent; for log-decay rates the
    is_log: bool                 # exponent applies to log t instead of t
    optimal_eta: float

    @property
    def label(self) -> str:
        if self.is_log:
            return f"(log t)^-{self.nu:g}"
        return f"t^-{self.nu:g}"


def predict_rate(beta: float, eta: float, eps: float = 0.05) -> RatePrediction:
    """Predicted last-iterate decay exponent of the divergence for a given
    Legendre exponent and step-size exponent.

    * ``beta = 0``: exponent ``eta`` (so 1 at ``eta = 1``).
    * ``beta > 0``, ``eta = 1``: logarithmic decay ``(log t)^-((1-beta)/beta)``.
    * ``beta > 0``, ``eta < 1``: ``min((1-eta)(1-beta)/beta, eta)``.

    The optimal step exponent is ``1 - beta`` below the 1/2 phase transition
    and ``(1 + eps)/2`` at or above it.
    """
    if not 0.0 <= beta < 1.0:
        raise DomainError("beta must lie in [0, 1)")
    if not 0.5 < eta <= 1.0:
        raise DomainError("eta must lie in (1/2, 1]")
    optimal = 1.0 - beta if beta < 0.5 else (1.0 + eps) / 2.0
    if beta == 0.0:
        return RatePrediction(eta, False, 1.0)
    if eta == 1.0:
        return RatePrediction((1.0 - beta) / beta, True, optimal)
    return RatePrediction(min((1.0 - eta) * (1.0 - beta) / beta, eta), False, optimal)


@dataclass(frozen=True)
class TableRow:
    name: str
    geometry: str
    beta: float
    eta: float
    theory_nu: float
    nu_lo: float
    nu_hi: float


# observed-exponent acceptance windows for the two canned tables
APPENDIX_C_ROWS = (
    TableRow("euclidean", "euclidean", 0.0, 1.00, 1.0, 0.89, 1.09),
    TableRow("entropy", "entropy", 0.5, 0.55, 0.5, 0.38, 0.58),
    TableRow("tsallis-q0.5", "tsallis:q=0.5", 0.75, 0.55, 1.0 / 6.0, 0.09, 0.25),
    TableRow("tsallis-q1.5", "tsallis:q=1.5", 0.25, 0.75, 0.75, 0.61, 0.85),
)

SUPPLEMENTARY_07_ROWS = (
    TableRow("euclidean", "euclidean", 0.0, 0.7, 0.7, 0.66, 0.86),
    TableRow("entropy", "entropy", 0.5, 0.7, 0.3, 0.19, 0.40),
    TableRow("sqrt", "sqrt", 0.75, 0.7, 0.1, 0.03, 0.17),
)

TABLES = {
    "appendix-c": APPENDIX_C_ROWS,
    "supplementary-0.7": SUPPLEMENTARY_07_ROWS,
}


@dataclass(frozen=True)
class TableRowResult:
    row: TableRow
    observed_nu: float
    r2: float
    trials_used: int
    blowups: int

    @property
    def diff(self) -> float:
        return abs(self.observed_nu - self.row.theory_nu)

    @property
    def passed(self) -> bool:
        return self.row.nu_lo <= self.observed_nu <= self.row.nu_hi


@dataclass(frozen=True)
class TableReport:
    which: str
    rows: tuple
    seed: int

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write("geometry,beta,eta,theory_nu,observed_nu,diff,r2,trials,blowups,pass\n")
            for r in self.rows:
                f.write(f"{r.row.geometry},{r.row.beta:g},{r.row.eta:g},"
                        f"{r.row.theory_nu:.6g},{r.observed_nu:.6g},{r.diff:.6g},"
                        f"{r.r2:.6g},{r.trials_used},{r.blowups},"
                        f"{'true' if r.passed else 'false'}\n")


def row_config(row: TableRow, T: int = DEFAULT_T, trials: int = DEFAULT_TRIALS,
               seed: int = DEFAULT_SEED) -> ExperimentConfig:
    """Canned-table row setup: V(x) = x on the half-line, gamma_t = 1/t^eta,
    Gaussian noise with variance 1e-4, started at 0.1."""
    return ExperimentConfig(
        geometry=row.geometry, problem="linear1d:lambda=1", domain="halfline",
        gamma=1.0, t0=0.0, eta=row.eta, sigma2=DEFAULT_SIGMA2, T=T,
        trials=trials, x_init=DEFAULT_X_INIT, seed=seed)


def reproduce_table(which: str, T: int = DEFAULT_T, trials: int = DEFAULT_TRIALS,
                    seed: int = DEFAULT_SEED, threads: int | None = None,
                    curves_out: dict | None = None) -> TableReport:
    """Run every row of a canned table, regress the averaged curves, and
    compare observed exponents with the theory column at the rows' declared
    acceptance windows."""
    if which not in TABLES:
        raise ConfigError(f"unknown table {which!r}; pick from {sorted(TABLES)}")
    results = []
    for row in TABLES[which]:
        cfg = row_config(row, T=T, trials=trials, seed=seed)
        curve = run_trials(cfg, threads=threads)
        est = estimate_rate(curve.t, curve.mean_d, cfg.window, curve.trials_used)
        results.append(TableRowResult(row, est.nu, est.r2, curve.trials_used,
                                      curve.blowups))
        if curves_out is not None:
            curves_out[row.name] = curve
    return TableReport(which, tuple(results), seed)
