"""Inner loops, each with a numba and a pure-numpy implementation.

The compiled loops are used when numba imports cleanly and the environment
variable ``FORGETFULNESS_DISABLE_JIT`` is unset (or ``0``).  Both variants
are always importable under explicit names so they can be compared.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

JIT_DISABLED = os.environ.get("FORGETFULNESS_DISABLE_JIT", "0") not in ("", "0")
USE_JIT = HAVE_NUMBA and not JIT_DISABLED


def _njit(func):
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True)(func)


# --- forward Euler for dx/dt = -m x -----------------------------------------


def _euler_loop(x0, m, h, steps):
    x = x0
    for _ in range(steps):
        x = x + h * (-m * x)
    return x


euler_jit = _njit(_euler_loop)


def euler_numpy(x0, m, h, steps):
    # The Euler map for a linear ODE is multiplication by (1 - m h).
    return float(x0 * np.power(1.0 - m * h, steps))


# --- per-bin event counts ----------------------------------------------------


def _bin_counts_loop(times, start, width, n_bins):
    counts = np.zeros(n_bins, dtype=np.int64)
    for t in times:
        k = int(np.floor((t - start) / width))
        if 0 <= k < n_bins:
            counts[k] += 1
    return counts


bin_counts_jit = _njit(_bin_counts_loop)


def bin_counts_numpy(times, start, width, n_bins):
    k = np.floor((times - start) / width).astype(np.int64)
    k = k[(k >= 0) & (k < n_bins)]
    return np.bincount(k, minlength=n_bins).astype(np.int64)


# --- exponentially decayed weight per tag ------------------------------------


def _decayed_weights_loop(times, tag_index, n_tags, m, at):
    weights = np.zeros(n_tags)
    for i in range(times.shape[0]):
        weights[tag_index[i]] += np.exp(-m * (at - times[i]))
    return weights


decayed_weights_jit = _njit(_decayed_weights_loop)


def decayed_weights_numpy(times, tag_index, n_tags, m, at):
    return np.bincount(tag_index, weights=np.exp(-m * (at - times)), minlength=n_tags)


if USE_JIT:
    euler, bin_counts, decayed_weights = euler_jit, bin_counts_jit, decayed_weights_jit
else:
    euler, bin_counts, decayed_weights = euler_numpy, bin_counts_numpy, decayed_weights_numpy


def warm_up() -> None:
    """Trigger compilation of the jitted kernels (no-op on the numpy path)."""
    if not USE_JIT:
        return
    euler_jit(1.0, 0.5, 0.1, 2)
    bin_counts_jit(np.zeros(1), 0.0, 1.0, 1)
    decayed_weights_jit(np.zeros(1), np.zeros(1, dtype=np.int64), 1, 1.0, 0.0)
