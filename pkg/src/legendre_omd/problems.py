"""Variational-inequality problem instances and the stochastic oracle.

A problem is a vector field with a known solution and declared regularity
constants (Lipschitz modulus and a local strong-monotonicity modulus valid
within a neighborhood radius).  The oracle adds counter-indexed Gaussian
noise in the dual space, coordinate-wise.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .domains import Domain, SIMPLEX, full_space, half_line
from .errors import DomainError
from .rng import gaussian_noise, spawn_seed, step_code

LINEAR1D = "linear1d"
AFFINE_DIAG = "affine_diag"
BILINEAR = "bilinear"

NOISE_NONE = "none"
NOISE_GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class ProblemSpec:
    kind: str
    domain: Domain
    xstar: np.ndarray
    params: tuple            # (lam,) | (diag entries...) | (a, mu)
    L: float
    mu: float
    radius: float

    @property
    def is_scalar(self) -> bool:
        return self.domain.is_scalar

    @property
    def key(self) -> str:
        if self.kind == LINEAR1D:
            return f"linear1d:lambda={self.params[0]:g}"
        if self.kind == AFFINE_DIAG:
            return "affinediag:diag=" + ";".join(f"{v:g}" for v in self.params)
        a, mu = self.params
        return f"bilinear:a={a:g},mu={mu:g}"


def linear1d(lam: float = 1.0, xstar: float = 0.0,
             domain: Domain | None = None, radius: float = np.inf) -> ProblemSpec:
    """V(x) = lam (x - xstar) in one dimension."""
    if lam <= 0.0:
        raise DomainError("lambda must be positive")
    domain = domain if domain is not None else half_line()
    if not domain.is_scalar:
        raise DomainError("linear1d needs a one-dimensional domain")
    if not domain.contains(xstar):
        raise DomainError(f"solution {xstar} outside domain")
    return ProblemSpec(LINEAR1D, domain, np.array([float(xstar)]),
                       (float(lam),), L=float(lam), mu=float(lam), radius=radius)


def affine_diag(diag, xstar=None, domain: Domain | None = None,
                radius: float = np.inf) -> ProblemSpec:
    """V(x) = A (x - xstar) with a positive diagonal A."""
    d = np.asarray(diag, dtype=np.float64)
    if np.any(d <= 0.0):
        raise DomainError("diagonal entries must be positive")
    domain = domain if domain is not None else full_space(d.size)
    if xstar is None:
        xs = np.full(d.size, 1.0 / d.size) if domain.kind == SIMPLEX else np.zeros(d.size)
    else:
        xs = np.asarray(xstar, dtype=np.float64)
    if domain.kind == SIMPLEX:
        # L1/Linf norm pairing weakens both constants by the dimension
        L, mu = float(d.max()), float(d.min() / d.size)
    else:
        L, mu = float(d.max()), float(d.min())
    if not domain.contains(xs):
        raise DomainError(f"solution {xs} outside domain")
    return ProblemSpec(AFFINE_DIAG, domain, xs, tuple(d), L=L, mu=mu, radius=radius)


def bilinear(a: float = 1.0, mu: float = 0.0, xstar=None,
             radius: float = np.inf) -> ProblemSpec:
    """Saddle field V(x1, x2) = (a (x2 - x2*) + mu (x1 - x1*),
    -a (x1 - x1*) + mu (x2 - x2*)) on the plane.

    The rotation part is centered at the solution so that xstar solves the
    variational inequality for any placement; mu is the exact
    strong-monotonicity modulus.
    """
    xs = np.zeros(2) if xstar is None else np.asarray(xstar, dtype=np.float64)
    if mu < 0.0:
        raise DomainError("mu must be non-negative")
    L = float(np.hypot(a, mu))
    return ProblemSpec(BILINEAR, full_space(2), xs, (float(a), float(mu)),
                       L=L, mu=float(mu), radius=radius)


def get_problem(key: str, domain: Domain | None = None, xstar=None) -> ProblemSpec:
    """Resolve a problem key like ``linear1d:lambda=1`` or ``bilinear:a=1,mu=0.5``."""
    name, _, rest = key.strip().lower().partition(":")
    kv = {}
    if rest:
        for part in rest.split(","):
            k, _, v = part.partition("=")
            kv[k.strip()] = v
    if name == LINEAR1D:
        lam = float(kv.pop("lambda", 1.0))
        xs = float(kv.pop("xstar", 0.0 if xstar is None else xstar))
        if kv:
            raise DomainError(f"unknown parameters {sorted(kv)} for linear1d")
        return linear1d(lam, xs, domain)
    if name in ("affinediag", AFFINE_DIAG):
        diag = [float(v) for v in kv.pop("diag", "1").split(";")]
        if kv:
            raise DomainError(f"unknown parameters {sorted(kv)} for affinediag")
        return affine_diag(diag, xstar, domain)
    if name == BILINEAR:
        a = float(kv.pop("a", 1.0))
        mu = float(kv.pop("mu", 0.0))
        if kv:
            raise DomainError(f"unknown parameters {sorted(kv)} for bilinear")
        return bilinear(a, mu, xstar)
    raise DomainError(f"unknown problem key {key!r}")


def eval_field(p: ProblemSpec, x):
    """Exact field value V(x); scalar in, scalar out for 1-d problems."""
    scalar_in = np.ndim(x) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if not p.domain.contains(arr):
        raise DomainError(f"point {x!r} outside domain {p.domain.kind}")
    if p.kind == LINEAR1D:
        out = p.params[0] * (arr - p.xstar)
    elif p.kind == AFFINE_DIAG:
        out = np.asarray(p.params) * (arr - p.xstar)
    else:
        a, mu = p.params
        d = arr - p.xstar
        out = np.array([a * d[1] + mu * d[0], -a * d[0] + mu * d[1]])
    return float(out[0]) if scalar_in else out


@dataclass(frozen=True)
class OracleSpec:
    """First-order oracle: exact field plus optional Gaussian noise.

    Draws are a pure function of (seed, step index, coordinate), so repeated
    queries replay bit-for-bit and parallel trials never share state.
    """
    noise: str = NOISE_NONE
    sigma2: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.noise not in (NOISE_NONE, NOISE_GAUSSIAN):
            raise DomainError(f"unknown noise kind {self.noise!r}")
        if self.sigma2 < 0.0:
            raise DomainError("sigma2 must be non-negative")

    @property
    def sigma(self) -> float:
        return float(np.sqrt(self.sigma2)) if self.noise == NOISE_GAUSSIAN else 0.0

    def for_trial(self, trial: int) -> "OracleSpec":
        """Independent per-trial substream (reproducible regardless of order)."""
        return replace(self, seed=spawn_seed(self.seed, trial))

    def noise_block(self, codes: np.ndarray, dim: int) -> np.ndarray:
        if self.sigma == 0.0:
            shape = (len(codes),) if dim == 1 else (len(codes), dim)
            return np.zeros(shape)
        return gaussian_noise(self.seed, codes, dim, self.sigma)


def oracle_none() -> OracleSpec:
    return OracleSpec(NOISE_NONE, 0.0, 0)


def oracle_gaussian(sigma2: float, seed: int) -> OracleSpec:
    return OracleSpec(NOISE_GAUSSIAN, float(sigma2), int(seed))


def query_oracle(p: ProblemSpec, o: OracleSpec, x, step_index: float):
    """Oracle signal Y = V(x) + U at an (integer or half-integer) step index."""
    v = eval_field(p, x)
    if o.sigma == 0.0:
        return v
    code = np.array([step_code(step_index)], dtype=np.uint64)
    u = o.noise_block(code, p.domain.dim)[0]
    return v + (float(u) if np.ndim(v) == 0 else u)


@dataclass(frozen=True)
class ConstantsReport:
    declared_L: float
    declared_mu: float
    observed_L: float
    observed_mu: float
    worst_vi_gap: float
    samples: int

    @property
    def passed(self) -> bool:
        return (self.observed_L <= self.declared_L + 1e-9
                and self.observed_mu >= self.declared_mu - 1e-9
                and self.worst_vi_gap >= -1e-9)


def verify_constants(p: ProblemSpec, samples: int = 10_000, seed: int = 0) -> ConstantsReport:
    """Sampled check of the declared Lipschitz / strong-monotonicity constants.

    Reports the worst observed Lipschitz ratio, the worst observed
    monotonicity ratio inside the declared neighborhood, and the worst
    inner-product gap of the solution's optimality condition.
    """
    if samples < 1000:
        raise DomainError("need at least 1000 samples")
    rng = np.random.default_rng(seed)
    scale = min(p.radius, 2.0) if np.isfinite(p.radius) else 2.0
    xs = p.domain.sample(rng, samples, scale=scale)
    ys = p.domain.sample(rng, samples, scale=scale)
    vstar = eval_field(p, p.xstar if p.domain.dim > 1 else float(p.xstar[0]))
    obs_L = 0.0
    obs_mu = np.inf
    vi_gap = np.inf
    for x, y in zip(xs, ys):
        vx = eval_field(p, x)
        vy = eval_field(p, y)
        dn = p.domain.norm(y - x)
        if dn > 1e-12:
            obs_L = max(obs_L, p.domain.dual_norm(np.atleast_1d(vy) - np.atleast_1d(vx)) / dn)
        d = x - p.xstar
        n = p.domain.norm(d)
        if 1e-9 < n <= p.radius:
            obs_mu = min(obs_mu, float(np.atleast_1d(vx) @ d) / n**2)
        vi_gap = min(vi_gap, float(np.atleast_1d(vstar) @ d))
    return ConstantsReport(p.L, p.mu, obs_L, float(obs_mu), float(vi_gap), samples)
