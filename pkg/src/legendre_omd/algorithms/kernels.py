"""Hot iteration loops for one-dimensional problems.

The recursion is a strict dependence chain, so each trial runs sequentially;
trials parallelize outside.  Noise arrives pregenerated (one draw per oracle
query, index 0 being the bootstrap query at the initial leading state) so the
jitted and fallback paths consume identical streams.
"""
from __future__ import annotations

import numpy as np

from .._accel import jit
from ..geometry.kernels import div_scalar, prox_scalar


def _omd_scalar_full(code, a, lam, xstar, gammas, noise, x_init, blowup,
                     xb, xl, ys, dd):
    T = gammas.shape[0]
    x = x_init
    y_prev = lam * (x_init - xstar) + noise[0]
    xb[0] = x_init
    ys[0] = y_prev
    dd[0] = div_scalar(code, a, xstar, x_init)
    bt = 0
    for t in range(1, T + 1):
        g = gammas[t - 1]
        xlead = prox_scalar(code, a, x, -g * y_prev)
        if not np.isfinite(xlead):
            bt = t
            break
        y = lam * (xlead - xstar) + noise[t]
        xn = prox_scalar(code, a, x, -g * y)
        if not np.isfinite(xn):
            bt = t
            break
        d = div_scalar(code, a, xstar, xn)
        if not (d <= blowup):
            bt = t
            break
        xl[t - 1] = xlead
        ys[t] = y
        xb[t] = xn
        dd[t] = d
        x = xn
        y_prev = y
    if bt > 0:
        for i in range(bt, T + 1):
            xb[i] = np.nan
            ys[i] = np.nan
            dd[i] = np.nan
        for i in range(bt - 1, T):
            xl[i] = np.nan
    return bt


def _omd_scalar_curve(code, a, lam, xstar, gammas, noise, x_init, blowup,
                      radius, checks, out_d):
    T = gammas.shape[0]
    x = x_init
    y_prev = lam * (x_init - xstar) + noise[0]
    esc = 0
    if radius > 0.0 and abs(x_init - xstar) > radius:
        esc = 1  # initial leading/base state already outside
    ci = 0
    if ci < checks.shape[0] and checks[ci] == 1:
        out_d[ci] = div_scalar(code, a, xstar, x_init)
        ci += 1
    bt = 0
    for t in range(1, T + 1):
        g = gammas[t - 1]
        xlead = prox_scalar(code, a, x, -g * y_prev)
        if not np.isfinite(xlead):
            bt = t
            break
        if radius > 0.0 and esc == 0 and abs(xlead - xstar) > radius:
            esc = 2 * t + 1
        y = lam * (xlead - xstar) + noise[t]
        xn = prox_scalar(code, a, x, -g * y)
        if not np.isfinite(xn):
            bt = t
            break
        d = div_scalar(code, a, xstar, xn)
        if not (d <= blowup):
            bt = t
            break
        if radius > 0.0 and esc == 0 and abs(xn - xstar) > radius:
            esc = 2 * (t + 1)
        x = xn
        y_prev = y
        if ci < checks.shape[0] and checks[ci] == t + 1:
            out_d[ci] = d
            ci += 1
    if bt > 0:
        while ci < checks.shape[0]:
            out_d[ci] = np.nan
            ci += 1
        if esc == 0:
            esc = 2 * bt  # a blow-up leaves every bounded neighborhood
    return bt, esc


def _mp_scalar_full(code, a, lam, xstar, gamma, x_init, blowup, xb, xl, ys, dd):
    T = xl.shape[0]
    x = x_init
    xb[0] = x_init
    ys[0] = lam * (x_init - xstar)
    dd[0] = div_scalar(code, a, xstar, x_init)
    bt = 0
    for t in range(1, T + 1):
        xlead = prox_scalar(code, a, x, -gamma * lam * (x - xstar))
        if not np.isfinite(xlead):
            bt = t
            break
        y = lam * (xlead - xstar)
        xn = prox_scalar(code, a, x, -gamma * y)
        if not np.isfinite(xn):
            bt = t
            break
        d = div_scalar(code, a, xstar, xn)
        if not (d <= blowup):
            bt = t
            break
        xl[t - 1] = xlead
        ys[t] = y
        xb[t] = xn
        dd[t] = d
        x = xn
    if bt > 0:
        for i in range(bt, T + 1):
            xb[i] = np.nan
            ys[i] = np.nan
            dd[i] = np.nan
        for i in range(bt - 1, T):
            xl[i] = np.nan
    return bt


def _mp_scalar_curve(code, a, lam, xstar, gamma, T, x_init, blowup, checks, out_d):
    x = x_init
    ci = 0
    if ci < checks.shape[0] and checks[ci] == 1:
        out_d[ci] = div_scalar(code, a, xstar, x_init)
        ci += 1
    bt = 0
    for t in range(1, T + 1):
        xlead = prox_scalar(code, a, x, -gamma * lam * (x - xstar))
        if not np.isfinite(xlead):
            bt = t
            break
        xn = prox_scalar(code, a, x, -gamma * lam * (xlead - xstar))
        if not np.isfinite(xn):
            bt = t
            break
        d = div_scalar(code, a, xstar, xn)
        if not (d <= blowup):
            bt = t
            break
        x = xn
        if ci < checks.shape[0] and checks[ci] == t + 1:
            out_d[ci] = d
            ci += 1
    while bt > 0 and ci < checks.shape[0]:
        out_d[ci] = np.nan
        ci += 1
    return bt


omd_scalar_full = jit(_omd_scalar_full)
omd_scalar_curve = jit(_omd_scalar_curve)
mp_scalar_full = jit(_mp_scalar_full)
mp_scalar_curve = jit(_mp_scalar_curve)
