"""Counter-based random number generation.

Noise draws are indexed, not streamed: the value attached to
``(seed, step index, coordinate)`` is a pure function of those integers, built
from the splitmix64 output function.  This makes oracle queries replayable and
lets parallel trials share nothing.  Two 64-bit words feed one Box-Muller
transform per Gaussian draw.
"""
from __future__ import annotations

import numpy as np

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_SALT_STREAM = np.uint64(0x5851F42D4C957F2D)
_SALT_SPAWN = np.uint64(0xD1342543DE82EF95)
_TWO53 = 2.0 ** -53


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def _as_u64(seed: int) -> np.ndarray:
    return np.asarray(np.uint64(seed & 0xFFFFFFFFFFFFFFFF))


def stream_key(seed: int) -> int:
    """64-bit stream key derived from a seed."""
    with np.errstate(over="ignore"):
        return int(_mix64(_as_u64(seed) ^ _SALT_STREAM))


def spawn_seed(seed: int, index: int) -> int:
    """Derive an independent child seed (per-trial substream)."""
    with np.errstate(over="ignore"):
        k = _mix64(_as_u64(seed) ^ _SALT_SPAWN)
        return int(_mix64(k + _as_u64(index + 1) * _GOLDEN))


def normal_words(seed: int, indices: np.ndarray) -> np.ndarray:
    """Standard-normal draws at the given draw indices.

    ``indices`` is an integer array of non-negative draw counters; the result
    depends only on ``(seed, index)`` element-wise.
    """
    with np.errstate(over="ignore"):
        key = np.uint64(stream_key(seed))
        k = np.asarray(indices, dtype=np.uint64)
        w1 = _mix64(key + (np.uint64(2) * k) * _GOLDEN)
        w2 = _mix64(key + (np.uint64(2) * k + np.uint64(1)) * _GOLDEN)
    u1 = ((w1 >> np.uint64(11)).astype(np.float64) + 1.0) * _TWO53
    u2 = (w2 >> np.uint64(11)).astype(np.float64) * _TWO53
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)


def step_code(step_index: float) -> int:
    """Integer code for an (integer or half-integer) step index."""
    c = int(round(2.0 * float(step_index)))
    if c < 0:
        raise ValueError(f"negative step index {step_index}")
    return c


def gaussian_noise(seed: int, codes: np.ndarray, dim: int, sigma: float) -> np.ndarray:
    """Gaussian noise block for the given step codes.

    Returns shape ``(len(codes),)`` when ``dim == 1`` else ``(len(codes), dim)``.
    Draw index is ``code * dim + coordinate``.
    """
    codes = np.asarray(codes, dtype=np.uint64)
    if dim == 1:
        return sigma * normal_words(seed, codes)
    idx = codes[:, None] * np.uint64(dim) + np.arange(dim, dtype=np.uint64)[None, :]
    return sigma * normal_words(seed, idx)
