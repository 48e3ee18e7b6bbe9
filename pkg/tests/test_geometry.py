"""Geometry layer: closed-form values, prox-mappings, divergence properties."""
import math

import numpy as np
import pytest

from legendre_omd import (DomainError, NumericalError, ProxDomainError,
                          divergence, eval_h, get_geometry, grad_h, half_line,
                          prox, simplex, unit_ball, unit_interval)
from legendre_omd.geometry import kernels as K

from _props import (div_many, dual_norms, geometry_cases, grad_many, norms,
                    prox_many, sample_pairs, sample_steps)

HL = half_line()
UI = unit_interval()

N_SAMPLES = 10_000


# -- closed-form values -------------------------------------------------------

def test_eval_h_values():
    assert eval_h(get_geometry("euclidean", HL), 0.2) == pytest.approx(0.02)
    # two-sided entropy at the midpoint: 2 * 0.5 * log 0.5
    assert eval_h(get_geometry("entropy", UI), 0.5) == pytest.approx(-math.log(2))
    assert eval_h(get_geometry("hellinger", unit_ball(2)), np.zeros(2)) == pytest.approx(-1.0)
    assert eval_h(get_geometry("entropy", HL), 0.0) == 0.0  # 0 log 0 = 0
    assert eval_h(get_geometry("sqrt", HL), 4.0) == pytest.approx(0.0)  # x - 2 sqrt x


def test_grad_h_values():
    assert grad_h(get_geometry("euclidean", HL), 0.3) == pytest.approx(0.3)
    assert grad_h(get_geometry("entropy", HL), 1.0) == pytest.approx(1.0)
    for p in (0.3, 0.5, 0.8):
        assert grad_h(get_geometry(f"fracpow:p={p}", HL), 1.0) == pytest.approx(0.0)
    g = grad_h(get_geometry("entropy", simplex(3)), np.array([0.2, 0.3, 0.5]))
    assert g == pytest.approx(1.0 + np.log([0.2, 0.3, 0.5]))


def test_divergence_values():
    assert divergence(get_geometry("entropy", UI), 0.0, 0.5) == pytest.approx(math.log(2))
    assert divergence(get_geometry("entropy", HL), 0.0, 0.3) == pytest.approx(0.3)
    gh = get_geometry("hellinger", unit_ball(2))
    assert divergence(gh, np.array([1.0, 0.0]), np.array([0.6, 0.0])) == pytest.approx(0.5)
    # tsallis on the half-line: D(0, x) = x^q / q
    for q in (0.5, 1.5):
        gt = get_geometry(f"tsallis:q={q}", HL)
        assert divergence(gt, 0.0, 0.3) == pytest.approx(0.3 ** q / q)
    # fractional power: D(0, x) = x^p
    assert divergence(get_geometry("fracpow:p=0.5", HL), 0.0, 0.3) == pytest.approx(math.sqrt(0.3))
    # D(x, x) = 0
    for case in geometry_cases():
        p, x = sample_pairs(case, 5, np.random.default_rng(1))
        for xi in x:
            assert divergence(case.g, xi, xi) == pytest.approx(0.0, abs=1e-14)


def test_prox_closed_forms():
    assert prox(get_geometry("entropy", HL), 0.1, -0.5) == pytest.approx(0.1 * math.exp(-0.5))
    assert prox(get_geometry("euclidean", UI), 0.5, 0.9) == 1.0
    gt = get_geometry("tsallis:q=1.5", UI)
    for x in (0.2, 0.5, 0.9):
        assert prox(gt, x, 0.0) == pytest.approx(x, abs=1e-12)
    # square root: 1 / (1/sqrt(x) - y)^2
    gs = get_geometry("sqrt", HL)
    assert prox(gs, 0.25, -1.0) == pytest.approx(1.0 / (2.0 + 1.0) ** 2)
    # multiplicative-weights normalization on the simplex
    gsx = get_geometry("entropy", simplex(3))
    x = np.array([0.2, 0.3, 0.5])
    y = np.array([0.1, -0.2, 0.3])
    w = x * np.exp(y)
    assert prox(gsx, x, y) == pytest.approx(w / w.sum())


def test_prox_unbounded_step_raises():
    # tsallis q < 1 has a bounded dual range; stepping past it is unbounded
    with pytest.raises(NumericalError):
        prox(get_geometry("tsallis:q=0.5", HL), 1.0, 10.0)
    with pytest.raises(NumericalError):
        prox(get_geometry("sqrt", HL), 1.0, 5.0)


def test_domain_and_prox_domain_errors():
    g = get_geometry("entropy", HL)
    with pytest.raises(DomainError):
        eval_h(g, -0.5)
    with pytest.raises(ProxDomainError):
        grad_h(g, 0.0)
    with pytest.raises(ProxDomainError):
        prox(g, 0.0, 0.1)
    with pytest.raises(ProxDomainError):
        divergence(g, 0.5, 0.0)
    with pytest.raises(NumericalError):
        prox(g, 0.1, math.nan)
    with pytest.raises(DomainError):
        get_geometry("entropy", unit_ball(2))
    with pytest.raises(DomainError):
        get_geometry("euclidean", simplex(3))


def test_tsallis_order_one_is_entropy():
    g = get_geometry("tsallis:q=1", UI)
    assert g.name == "entropy"


def test_geometry_keys_roundtrip():
    for key in ("euclidean", "entropy", "tsallis:q=0.5", "fracpow:p=0.5", "sqrt"):
        assert get_geometry(key, HL).key == key


# -- sampled property suites --------------------------------------------------

@pytest.mark.parametrize("case", geometry_cases(), ids=lambda c: c.label)
def test_strong_convexity_lower_bound(case):
    rng = np.random.default_rng(11)
    p, x = sample_pairs(case, N_SAMPLES, rng)
    d = div_many(case.g, p, x)
    gap = d - 0.5 * norms(case.g, p - x) ** 2
    assert gap.min() >= -1e-10, f"{case.label}: worst gap {gap.min()}"


@pytest.mark.parametrize("case", geometry_cases(), ids=lambda c: c.label)
def test_prox_nonexpansive_in_dual_argument(case):
    # non-expansivity follows from 1-strong convexity, so on the half-line it
    # binds only while the outputs stay inside the strong-convexity region;
    # pairs whose outputs escape it are filtered out
    rng = np.random.default_rng(12)
    _, x = sample_pairs(case, N_SAMPLES, rng)
    y1 = sample_steps(case, N_SAMPLES, rng)
    y2 = sample_steps(case, N_SAMPLES, rng)
    r1 = prox_many(case.g, x, y1)
    r2 = prox_many(case.g, x, y2)
    ok = np.isfinite(np.atleast_2d(r1).reshape(len(x), -1)).all(axis=1)
    ok &= np.isfinite(np.atleast_2d(r2).reshape(len(x), -1)).all(axis=1)
    box = case.g.strong_convexity_box()
    if np.isfinite(box):
        ok &= (r1 <= box) & (r2 <= box)
    lhs = norms(case.g, r1 - r2)[ok]
    rhs = dual_norms(case.g, y1 - y2)[ok]
    assert ok.mean() > 0.3, f"{case.label}: kept only {ok.mean():.0%}"
    assert (lhs <= rhs + 1e-10).all(), f"{case.label}: worst {np.max(lhs - rhs)}"


def _normal_cone_ok(case, x_out, z, tol=1e-8):
    """z must lie in the normal cone at x_out (zero at interior outputs)."""
    g = case.g
    kind = g.domain.kind
    if g.is_scalar:
        lo = {"halfline": 0.0, "unitinterval": 0.0, "ball": -1.0, "fullspace": -np.inf}[kind]
        hi = {"halfline": np.inf, "unitinterval": 1.0, "ball": 1.0, "fullspace": np.inf}[kind]
        if x_out <= lo + 1e-12:
            return z <= tol
        if x_out >= hi - 1e-12:
            return z >= -tol
        if min(x_out - lo, hi - x_out) < 1e-3:
            return True  # too close to steep boundary for a residual check
        return abs(z) <= tol
    if kind == "simplex":
        # normal cone of the interior is the span of the all-ones vector
        return np.max(np.abs(z - z.mean())) <= tol
    n = np.linalg.norm(x_out)
    if n >= 1.0 - 1e-12:
        rad = float(z @ x_out) / n
        tangential = z - rad * x_out / n
        return rad >= -tol and np.linalg.norm(tangential) <= tol
    return np.linalg.norm(z) <= tol


@pytest.mark.parametrize("case", geometry_cases(), ids=lambda c: c.label)
def test_prox_first_order_condition(case):
    rng = np.random.default_rng(13)
    _, x = sample_pairs(case, N_SAMPLES, rng)
    y = sample_steps(case, N_SAMPLES, rng)
    out = prox_many(case.g, x, y)
    ok = np.isfinite(np.atleast_2d(out).reshape(len(x), -1)).all(axis=1)
    z = grad_many(case.g, x[ok]) + y[ok] - grad_many(case.g, out[ok])
    checked = 0
    for xi_out, zi in zip(out[ok], z):
        assert _normal_cone_ok(case, xi_out, zi), \
            f"{case.label}: residual {zi} at output {xi_out}"
        checked += 1
    assert checked > 0.9 * N_SAMPLES


@pytest.mark.parametrize("case", geometry_cases(), ids=lambda c: c.label)
def test_divergence_gradient_matches_finite_differences(case):
    # d/dp D(p, x) = grad h(p) - grad h(x), by central differences at
    # interior points away from boundaries
    rng = np.random.default_rng(14)
    n = 400
    p, x = sample_pairs(case, n, rng)
    g = case.g
    if g.is_scalar:
        margin = 0.05
        kind = g.domain.kind
        if kind in ("halfline", "unitinterval"):
            keep = (p > margin) & (p < 1 - margin) & (x > margin) & (x < 1 - margin)
        else:
            keep = (np.abs(p) < 1 - margin) & (np.abs(x) < 1 - margin)
        p, x = p[keep], x[keep]
        h = 1e-6
        fd = (div_many(g, p + h, x) - div_many(g, p - h, x)) / (2 * h)
        exact = grad_many(g, p) - grad_many(g, x)
        rel = np.abs(fd - exact) / np.maximum(1.0, np.abs(exact))
        assert rel.max() <= 1e-6
        return
    keep = []
    for pi, xi in zip(p, x):
        if g.domain.kind == "simplex":
            keep.append(pi.min() > 0.05 and xi.min() > 0.05)
        else:
            keep.append(np.linalg.norm(pi) < 0.9 and np.linalg.norm(xi) < 0.9)
    p, x = p[np.array(keep)], x[np.array(keep)]
    h = 1e-6
    from legendre_omd.geometry.spec import _vec_div
    for pi, xi in zip(p[:200], x[:200]):
        exact = grad_many(g, [pi])[0] - grad_many(g, [xi])[0]
        for j in range(g.domain.dim):
            e = np.zeros(g.domain.dim)
            e[j] = h
            fd = (_vec_div(g, pi + e, xi) - _vec_div(g, pi - e, xi)) / (2 * h)
            assert abs(fd - exact[j]) / max(1.0, abs(exact[j])) <= 1e-6


def test_domain_midpoint_convexity():
    rng = np.random.default_rng(15)
    for dom in (HL, UI, simplex(4), unit_ball(3)):
        a = dom.sample(rng, 50)
        b = dom.sample(rng, 50)
        for ai, bi in zip(a, b):
            assert dom.contains((ai + bi) / 2)


@pytest.mark.parametrize("q", [0.5, 1.5])
def test_bisection_prox_is_the_argmin(q):
    # independent optimality check: the objective <y, x - z> + D(z, x) at the
    # bisection output never exceeds its value at nearby feasible points
    gt = get_geometry(f"tsallis:q={q}", UI)
    rng = np.random.default_rng(16)

    def objective(z, x, y):
        return -y * (z - x) + divergence(gt, z, x)

    for _ in range(300):
        x = rng.uniform(0.01, 0.99)
        y = rng.normal()
        out = prox(gt, x, y)
        f0 = objective(out, x, y)
        for delta in (1e-4, 1e-2, 0.1):
            for z in (out - delta, out + delta):
                if 0.0 <= z <= 1.0:
                    assert f0 <= objective(z, x, y) + 1e-10
