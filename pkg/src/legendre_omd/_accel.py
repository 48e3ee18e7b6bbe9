"""Numba acceleration plumbing.

Hot kernels are plain Python functions wrapped with ``numba.njit`` when
acceleration is available.  Setting the environment variable
``LEGENDRE_OMD_NO_NUMBA=1`` (or any value other than ``0``/empty) selects the
pure-Python/NumPy fallback path; the same source runs interpreted, so both
paths compute identical formulas.
"""
from __future__ import annotations

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_flag = os.environ.get("LEGENDRE_OMD_NO_NUMBA", "")
NUMBA_ENABLED = numba is not None and _flag in ("", "0")


if NUMBA_ENABLED:
    def jit(fn):
        return numba.njit(cache=True, nogil=True)(fn)
else:
    def jit(fn):
        return fn
