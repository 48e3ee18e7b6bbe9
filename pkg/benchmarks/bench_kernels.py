#!/usr/bin/env python3
"""Benchmark: jit-compiled kernels vs the pure-Python fallback path.

Runs the same optimistic-mirror-descent workload twice in subprocesses, once
with numba acceleration (default) and once with LEGENDRE_OMD_NO_NUMBA=1, and
prints both timings.

    python3 benchmarks/bench_kernels.py [T] [trials]
"""
import os
import subprocess
import sys

_WORKLOAD = r"""
import sys, time
import numpy as np
from legendre_omd import ExperimentConfig, run_trials
from legendre_omd._accel import NUMBA_ENABLED

T, trials = int(sys.argv[1]), int(sys.argv[2])
cfg = ExperimentConfig(geometry="entropy", eta=0.7, T=T, trials=trials, seed=1)
run_trials(cfg)           # warm-up: jit compilation happens here
t0 = time.perf_counter()
curve = run_trials(cfg)
dt = time.perf_counter() - t0
print(f"{'numba' if NUMBA_ENABLED else 'fallback'}: {dt:.3f}s "
      f"({T * trials / dt / 1e6:.2f} M steps/s), "
      f"final mean divergence {curve.mean_d[-1]:.3e}")
"""


def run(no_numba: bool, T: int, trials: int) -> None:
    env = dict(os.environ)
    env["LEGENDRE_OMD_NO_NUMBA"] = "1" if no_numba else "0"
    subprocess.run([sys.executable, "-c", _WORKLOAD, str(T), str(trials)],
                   env=env, check=True)


def main() -> None:
    T = int(sys.argv[1]) if len(sys.argv) > 1 else 100_000
    trials = int(sys.argv[2]) if len(sys.argv) > 2 else 20
    fallback_trials = max(1, trials // 10)
    print(f"workload: entropy geometry, T={T}, eta=0.7", flush=True)
    run(False, T, trials)
    print(f"(fallback runs {fallback_trials} trial(s); scale accordingly)",
          flush=True)
    run(True, T, fallback_trials)


if __name__ == "__main__":
    main()
