"""Exponential forgetting of interest.

Interest in an object decays as ``x(t) = x0 * exp(-m t)``, the solution of
``dx/dt = -m x``.  The right-hand side ``M(x) = -m x`` is the forgetfulness
function and ``m > 0`` is the tedium coefficient: the larger ``m``, the
faster the object is forgotten.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConstraintError, DomainError, StepSizeError

__all__ = [
    "DecayParams",
    "evaluate_interest",
    "forgetfulness_rate",
    "integrate_euler",
    "half_life",
    "decay_curve",
]


def _check_m(m: float) -> None:
    if not (math.isfinite(m) and m > 0):
        raise ConstraintError(f"tedium coefficient must satisfy m > 0 and be finite, got {m!r}")


@dataclass(frozen=True, slots=True)
class DecayParams:
    """Initial interest ``x0 >= 0`` and tedium coefficient ``m > 0`` (per second)."""

    x0: float
    m: float

    def __post_init__(self):
        if not (math.isfinite(self.x0) and self.x0 >= 0):
            raise ConstraintError(f"initial interest must be finite and >= 0, got {self.x0!r}")
        _check_m(self.m)

    def interest(self, t):
        return evaluate_interest(self, t)

    def rate(self, x):
        return forgetfulness_rate(x, self.m)

    @property
    def half_life(self) -> float:
        return half_life(self.m)


def evaluate_interest(params: DecayParams, t):
    """Closed-form interest after elapsed time ``t`` (scalar or array, seconds)."""
    arr = np.asarray(t, dtype=float)
    if np.any(~(arr >= 0)):
        raise DomainError(f"elapsed time must be >= 0, got {t!r}")
    x = params.x0 * np.exp(-params.m * arr)
    return float(x) if x.ndim == 0 else x


def forgetfulness_rate(x, m: float):
    """Rate of change of interest, ``-m x``."""
    _check_m(m)
    rate = -m * np.asarray(x, dtype=float)
    return float(rate) if rate.ndim == 0 else rate


def integrate_euler(params: DecayParams, t: float, steps: int) -> float:
    """Forward-Euler approximation of ``x(t)`` using ``steps`` equal steps.

    The step must satisfy ``m * t / steps <= 1``; beyond that the iterate
    changes sign and oscillates.
    """
    if t < 0:
        raise DomainError(f"elapsed time must be >= 0, got {t!r}")
    if int(steps) != steps or steps < 1:
        raise ValueError(f"steps must be a positive integer, got {steps!r}")
    steps = int(steps)
    h = t / steps
    if params.m * h > 1.0:
        min_steps = math.ceil(params.m * t)
        raise StepSizeError(
            f"step size {h!r} is unstable for m={params.m!r}; use at least {min_steps} steps",
            min_steps,
        )
    return float(_kernels.euler(float(params.x0), float(params.m), float(h), steps))


def half_life(m: float) -> float:
    _check_m(m)
    return math.log(2.0) / m


def decay_curve(params: DecayParams, t_max: float, samples: int) -> list[tuple[float, float]]:
    """Evenly spaced ``(t, x)`` samples of the decay on ``[0, t_max]``."""
    if samples < 2:
        raise ValueError(f"need at least 2 samples, got {samples!r}")
    if not t_max > 0:
        raise DomainError(f"t_max must be > 0, got {t_max!r}")
    ts = np.linspace(0.0, t_max, int(samples))
    xs = evaluate_interest(params, ts)
    return list(zip(ts.tolist(), xs.tolist()))
