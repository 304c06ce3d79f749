"""Counter-based uniform streams for reproducible Monte Carlo.

Every sample owns a deterministic stream addressed by (seed, sample index,
step counter), so estimates are bit-identical under any chunking or parallel
schedule.  The generator is a double splitmix64 finalizer chain, vectorized
over sample indices.
"""

from __future__ import annotations

import numpy as np

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MASK = 0xFFFFFFFFFFFFFFFF


def _mix(x: np.ndarray) -> np.ndarray:
    x = x ^ (x >> np.uint64(30))
    x = x * _M1
    x = x ^ (x >> np.uint64(27))
    x = x * _M2
    return x ^ (x >> np.uint64(31))


def sample_uniforms(seed: int, sample_indices, step: int) -> np.ndarray:
    """Uniform [0, 1) draw for each sample index at the given step counter."""
    idx = np.asarray(sample_indices, dtype=np.uint64)
    with np.errstate(over="ignore"):
        s = _mix(np.asarray(seed & _MASK, dtype=np.uint64))
        x = _mix(s + _GAMMA * (idx + np.uint64(1)))
        x = _mix(x + _GAMMA * np.uint64((step + 1) & _MASK))
    return (x >> np.uint64(11)).astype(np.float64) * 2.0**-53


def uniform_at(seed: int, index: int, step: int) -> float:
    """Scalar convenience wrapper around sample_uniforms."""
    return float(sample_uniforms(seed, np.asarray([index], dtype=np.uint64), step)[0])
