"""Optimistic mirror descent, mirror-prox, descent inequality, stability."""
import numpy as np
import pytest

from legendre_omd import (DivergenceError, PreconditionError, ProxDomainError,
                          StepSchedule, bilinear, check_descent_inequality,
                          estimate_stability, full_space, get_geometry,
                          half_line, linear1d, oracle_gaussian, oracle_none,
                          run_mirror_prox, run_omd, simplex,
                          stability_lower_bound, unit_ball)
from legendre_omd.algorithms import checkpoints
import legendre_omd.problems as problems

HL = half_line()


def _affine_diag_simplex():
    return problems.affine_diag([1.0, 1.0, 1.0], np.array([0.2, 0.3, 0.5]),
                                simplex(3))


def test_schedule_contract():
    s = StepSchedule(1.0, 2.0, 0.7)
    g = s.values(100)
    assert g[0] == pytest.approx(1.0 / 3.0 ** 0.7)
    assert np.all(np.diff(g) < 0)
    assert s.gamma_sq_sum(100_000) <= s.gamma_sq_sum_bound()
    with pytest.raises(Exception):
        StepSchedule(1.0, 0.0, 0.4)


def test_first_full_step_matches_euclidean_closed_form():
    # from the coupled start, one optimistic step contracts by 1 - g + g^2
    p = linear1d(1.0, 0.0, full_space(1))
    g = get_geometry("euclidean", full_space(1))
    gamma = 0.3
    sched = StepSchedule(gamma * (1 + 1e9) ** 1.0, 1e9, 1.0)  # ~constant step
    traj = run_omd(p, g, sched, oracle_none(), 2, 0.8)
    step = sched.at(1)
    assert traj.x[1] == pytest.approx((1 - step + step ** 2) * 0.8, rel=1e-12)


def test_fixed_point_at_interior_solution():
    p = linear1d(1.0, 0.3, HL)
    for key in ("euclidean", "entropy", "tsallis:q=1.5"):
        g = get_geometry(key, HL)
        traj = run_omd(p, g, StepSchedule(0.25, 0.0, 0.7), oracle_none(), 50, 0.3)
        assert np.allclose(traj.x, 0.3)
        assert np.allclose(traj.d, 0.0)


def test_replay_determinism_bit_identical():
    p = linear1d(1.0, 0.0, HL)
    g = get_geometry("entropy", HL)
    sched = StepSchedule(0.25, 0.0, 0.7)
    o = oracle_gaussian(1e-4, 31)
    t1 = run_omd(p, g, sched, o, 500, 0.1)
    t2 = run_omd(p, g, sched, o, 500, 0.1)
    assert np.array_equal(t1.x, t2.x)
    assert np.array_equal(t1.y, t2.y)
    assert t1.config_hash == t2.config_hash


def test_trajectory_feasibility_and_recorded_divergence():
    p = linear1d(1.0, 0.0, HL)
    for key in ("euclidean", "entropy", "tsallis:q=0.5", "sqrt"):
        g = get_geometry(key, HL)
        traj = run_omd(p, g, StepSchedule(0.25, 0.0, 0.7),
                       oracle_gaussian(1e-4, 5), 300, 0.1)
        assert all(g.in_prox_domain(x) for x in traj.x)
        assert all(g.in_prox_domain(x) for x in traj.x_lead)
        assert np.nanmax(np.abs(traj.recompute_divergence() - traj.d)) <= 1e-12


def test_generic_path_matches_scalar_kernel():
    # force the generic python loop by exceeding the kernel's problem check:
    # run the same scalar config through both entry points
    from legendre_omd.algorithms.omd import _run_omd_generic
    p = linear1d(1.0, 0.0, HL)
    g = get_geometry("entropy", HL)
    sched = StepSchedule(0.25, 0.0, 0.7)
    o = oracle_gaussian(1e-4, 77)
    T = 400
    fast = run_omd(p, g, sched, o, T, 0.1)
    codes = np.arange(1, 2 * T + 2, 2, dtype=np.uint64)
    slow = _run_omd_generic(p, g, o, sched.values(T), o.noise_block(codes, 1),
                            T, 0.1, 1e9, "digest")
    assert np.allclose(fast.x, slow.x, rtol=0, atol=1e-14)
    assert np.allclose(fast.d, slow.d, rtol=0, atol=1e-14)


def test_noiseless_divergence_eventually_monotone():
    p = linear1d(1.0, 0.0, HL)
    for key in ("euclidean", "entropy", "tsallis:q=1.5", "sqrt"):
        g = get_geometry(key, HL)
        traj = run_omd(p, g, StepSchedule(0.25, 0.0, 0.7), oracle_none(), 500, 0.1)
        diffs = np.diff(traj.d[10:])
        assert np.all(diffs <= 1e-15), key


def test_blowup_raises_and_flags():
    # a huge step on the half-line entropy geometry overflows immediately
    p = linear1d(1.0, 0.0, HL)
    g = get_geometry("entropy", HL)
    sched = StepSchedule(1000.0, 0.0, 0.51)
    o = oracle_gaussian(25.0, 3)
    with pytest.raises(DivergenceError):
        run_omd(p, g, sched, o, 200, 0.1)
    traj = run_omd(p, g, sched, o, 200, 0.1, raise_on_blowup=False)
    assert traj.blew_up and traj.blowup_t >= 1
    assert np.isnan(traj.d[-1])


def test_run_omd_validation():
    p = linear1d(1.0, 0.0, HL)
    g = get_geometry("entropy", HL)
    with pytest.raises(ProxDomainError):
        run_omd(p, g, StepSchedule(0.25, 0.0, 0.7), oracle_none(), 10, 0.0)
    with pytest.raises(PreconditionError):
        run_omd(p, g, StepSchedule(0.25, 0.0, 0.7), oracle_none(), 1, 0.1)
    with pytest.raises(Exception):
        run_omd(p, get_geometry("entropy", simplex(3)),
                StepSchedule(0.25, 0.0, 0.7), oracle_none(), 10, 0.1)


def test_checkpoints_thinning():
    c = checkpoints(2_000_000)
    assert c[0] == 1 and c[-1] == 2_000_001
    assert len(c) < 400
    assert np.all(np.diff(c) > 0)
    assert np.array_equal(checkpoints(100), np.arange(1, 102))


# -- descent inequality -------------------------------------------------------

@pytest.mark.parametrize("key", ["euclidean", "entropy", "tsallis:q=1.5"])
def test_descent_inequality_zero_violations(key):
    p = linear1d(1.0, 0.0, HL)
    g = get_geometry(key, HL)
    sched = StepSchedule(0.25, 0.0, 0.7)  # gamma_1 = 1/(4L)
    for seed in range(10):
        traj = run_omd(p, g, sched, oracle_gaussian(1e-4, 1000 + seed), 2000, 0.1)
        rep = check_descent_inequality(traj, p)
        assert rep.passed, f"{key} seed {seed}: violation {rep.max_violation}"


def test_descent_inequality_noiseless():
    p = linear1d(1.0, 0.0, HL)
    g = get_geometry("entropy", HL)
    traj = run_omd(p, g, StepSchedule(0.25, 0.0, 0.7), oracle_none(), 2000, 0.1)
    assert check_descent_inequality(traj, p).passed


def test_descent_inequality_vector_paths():
    sp = _affine_diag_simplex()
    sg = get_geometry("entropy", simplex(3))
    traj = run_omd(sp, sg, StepSchedule(0.2, 0.0, 0.7),
                   oracle_gaussian(1e-4, 8), 400, np.ones(3) / 3)
    assert check_descent_inequality(traj, sp).passed
    bp = bilinear(1.0, 0.5)
    bg = get_geometry("euclidean", full_space(2))
    traj = run_omd(bp, bg, StepSchedule(1.0 / (4.0 * bp.L), 0.0, 0.7),
                   oracle_gaussian(1e-4, 9), 400, np.array([0.5, -0.5]))
    assert check_descent_inequality(traj, bp).passed
    hg = get_geometry("hellinger", unit_ball(1))
    hp = linear1d(1.0, 1.0, unit_ball(1))
    traj = run_omd(hp, hg, StepSchedule(0.25, 0.0, 0.7),
                   oracle_gaussian(1e-4, 10), 400, 0.0)
    assert check_descent_inequality(traj, hp).passed


def test_descent_inequality_step_precondition():
    p = linear1d(1.0, 0.0, HL)
    g = get_geometry("euclidean", HL)
    traj = run_omd(p, g, StepSchedule(0.5, 0.0, 0.7), oracle_none(), 50, 0.1)
    with pytest.raises(PreconditionError):
        check_descent_inequality(traj, p)


def test_descent_rejects_mirror_prox_runs():
    p = linear1d(1.0, 0.0, HL)
    g = get_geometry("entropy", HL)
    traj = run_mirror_prox(p, g, 0.1, 50, 0.1)
    with pytest.raises(PreconditionError):
        check_descent_inequality(traj, p)


# -- mirror-prox --------------------------------------------------------------

def test_mirror_prox_euclidean_exact_geometric():
    p = linear1d(1.0, 0.0, full_space(1))
    g = get_geometry("euclidean", full_space(1))
    gamma = 0.5
    T = 40
    traj = run_mirror_prox(p, g, gamma, T, 1.0)
    expect = (1 - gamma + gamma ** 2) ** np.arange(T + 1)
    assert np.allclose(traj.x, expect, rtol=1e-12)


def test_mirror_prox_entropic_update_closed_form():
    # one entropic step on the half-line: x exp(-g x exp(-g x))
    p = linear1d(1.0, 0.0, HL)
    g = get_geometry("entropy", HL)
    gamma = 0.1
    traj = run_mirror_prox(p, g, gamma, 2, 0.5)
    x0 = 0.5
    x1 = x0 * np.exp(-gamma * x0 * np.exp(-gamma * x0))
    assert traj.x[1] == pytest.approx(x1, rel=1e-12)


def test_mirror_prox_entropic_rate_short():
    p = linear1d(1.0, 0.0, HL)
    g = get_geometry("entropy", HL)
    traj = run_mirror_prox(p, g, 0.1, 100_000, 0.5)
    assert traj.x[-1] * 0.1 * 100_000 == pytest.approx(1.0, abs=0.15)


# -- stability ----------------------------------------------------------------

def test_stability_noiseless_never_escapes():
    p = linear1d(1.0, 0.0, HL)
    g = get_geometry("euclidean", HL)
    rep = estimate_stability(p, g, StepSchedule(0.25, 0.0, 0.55), oracle_none(),
                             r=0.5, x_init=0.05, T=500, trials=100)
    assert rep.escape_frequency == 0.0
    assert rep.stay_frequency == 1.0


def test_stability_monotone_in_step_size():
    p = linear1d(1.0, 0.0, HL)
    g = get_geometry("euclidean", HL)
    o = oracle_gaussian(0.25, 17)
    freqs = []
    for gamma in (0.25, 0.125):
        rep = estimate_stability(p, g, StepSchedule(gamma, 0.0, 0.55), o,
                                 r=0.3, x_init=0.05, T=1000, trials=1000)
        freqs.append(rep.escape_frequency)
    assert freqs[0] > 0.05          # escapes actually happen at the larger step
    assert freqs[1] <= freqs[0]


def test_stability_respects_analytic_bound_when_positive():
    p = linear1d(1.0, 0.0, HL)
    g = get_geometry("entropy", HL)
    sched = StepSchedule(1.0, 0.0, 0.55)
    rep = estimate_stability(p, g, sched, oracle_gaussian(1e-4, 11),
                             r=1.0, x_init=0.1, T=2000, trials=200)
    assert rep.analytic_lower_bound > 0.0
    assert rep.stay_frequency >= rep.analytic_lower_bound


def test_stability_precondition():
    p = linear1d(1.0, 0.0, HL)
    g = get_geometry("euclidean", HL)
    with pytest.raises(PreconditionError):
        estimate_stability(p, g, StepSchedule(0.25, 0.0, 0.55), oracle_none(),
                           r=0.1, x_init=0.5, T=100, trials=100)
    with pytest.raises(PreconditionError):
        estimate_stability(p, g, StepSchedule(0.25, 0.0, 0.55), oracle_none(),
                           r=0.5, x_init=0.05, T=100, trials=50)


def test_stability_lower_bound_formula():
    # frozen evaluation of 1 - 9 (8 + r^2) s^2 G / (r^2 min(1, r^2/9))
    assert stability_lower_bound(1.0, 1e-4, 10.0) == pytest.approx(
        1.0 - 9.0 * 9.0 * 1e-3 / (1.0 / 9.0))


def test_trajectory_csv_roundtrip(tmp_path):
    p = linear1d(1.0, 0.0, HL)
    g = get_geometry("entropy", HL)
    traj = run_omd(p, g, StepSchedule(0.25, 0.0, 0.7), oracle_gaussian(1e-4, 2),
                   50, 0.1)
    path = tmp_path / "traj.csv"
    traj.write_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# config ")
    assert lines[1] == "t,X,D,phi"
    assert len(lines) == 2 + 51
    t, x, d, phi = lines[2].split(",")
    assert int(t) == 1 and float(x) == 0.1 and float(d) == 0.1 and float(phi) == 0.0
