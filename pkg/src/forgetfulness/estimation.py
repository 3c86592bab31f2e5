"""Estimating ``(x0, m)`` from a usage series.

Two estimators are provided: ordinary least squares on log counts, and a
damped Gauss-Newton (Levenberg-Marquardt) fit of ``x0 exp(-m t)`` to the raw
counts.  Both fit against ``series.elapsed`` so ``x0`` is the interest at
the series origin.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .decay import DecayParams
from .errors import DegenerateAbscissaError, InsufficientDataError, NumericalFailure
from .ingestion import UsageSeries

NO_FORGETTING = "no forgetting detected"
INSUFFICIENT_SIGNAL = "insufficient signal"

MAX_ITER = 200
REL_TOL = 1e-10
INITIAL_DAMPING = 1e-3
DAMPING_FACTOR = 10.0
_DAMPING_CEILING = 1e30


@dataclass
class FitResult:
    method: str
    x0: float
    m: float
    rmse: float
    r_squared: float
    n_points: int
    warnings: list[str] = field(default_factory=list)
    iterations: int = field(default=0, compare=False)

    @property
    def accepted(self) -> bool:
        return (
            self.n_points >= 3
            and math.isfinite(self.m)
            and self.m > 0
            and math.isfinite(self.x0)
            and self.x0 >= 0
        )

    @property
    def params(self) -> DecayParams:
        """The estimate as DecayParams; raises ConstraintError when not accepted."""
        return DecayParams(self.x0, self.m)

    def to_dict(self) -> dict:
        d = asdict(self)
        del d["iterations"]
        for key in ("x0", "m", "rmse", "r_squared"):
            if not math.isfinite(d[key]):
                d[key] = None
        d["accepted"] = self.accepted
        return d

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _model(x0: float, m: float, t: np.ndarray) -> np.ndarray:
    return x0 * np.exp(-m * t)


def _rmse_r2(y: np.ndarray, predicted: np.ndarray) -> tuple[float, float]:
    resid = y - predicted
    ssr = float(resid @ resid)
    dev = y - y.mean()
    sst = float(dev @ dev)
    rmse = math.sqrt(ssr / len(y))
    if sst == 0.0:
        r2 = 1.0 if ssr == 0.0 else -math.inf
    else:
        r2 = 1.0 - ssr / sst
    return rmse, r2


def goodness_of_fit(series: UsageSeries, params: DecayParams) -> tuple[float, float]:
    """RMSE and R^2 of the series against ``params`` at the bin midpoints.

    R^2 is ``-inf`` for a constant series that the curve does not hit exactly.
    """
    if len(series) == 0:
        raise ValueError("empty series")
    y = series.counts.astype(float)
    return _rmse_r2(y, _model(params.x0, params.m, series.elapsed))


def _check_abscissa(t: np.ndarray) -> None:
    if np.ptp(t) == 0:
        raise DegenerateAbscissaError("all bins share one timestamp")


def fit_loglinear(series: UsageSeries) -> FitResult:
    """Least squares line through ``(t, ln count)`` over the positive bins."""
    y = series.counts.astype(float)
    keep = y > 0
    if keep.sum() < 3:
        raise InsufficientDataError(f"log-linear fit needs >= 3 positive bins, got {int(keep.sum())}")
    t = series.elapsed[keep]
    _check_abscissa(t)
    logy = np.log(y[keep])
    tc = t - t.mean()
    slope = float(tc @ (logy - logy.mean()) / (tc @ tc))
    intercept = float(logy.mean() - slope * t.mean())
    x0, m = math.exp(intercept), -slope
    rmse, r2 = _rmse_r2(y[keep], _model(x0, m, t))
    warnings = [] if slope < 0 else [NO_FORGETTING]
    return FitResult("loglinear", x0, m, rmse, r2, int(keep.sum()), warnings)


def _initial_guess(series: UsageSeries) -> tuple[float, float]:
    try:
        first = fit_loglinear(series)
        if math.isfinite(first.x0) and math.isfinite(first.m):
            return first.x0, first.m
    except InsufficientDataError:
        pass
    span = float(np.ptp(series.elapsed))
    return float(series.counts.max()), math.log(2.0) / (span / 2.0)


def fit_nonlinear(series: UsageSeries, init: DecayParams | None = None) -> FitResult:
    """Levenberg-Marquardt fit of ``x0 exp(-m t)`` to the raw counts.

    Damping starts at 1e-3 and is multiplied by 10 after a rejected step and
    divided by 10 after an accepted one; the damping term is scaled by the
    diagonal of ``J^T J``.  Stops once the relative parameter step drops
    below 1e-10, or after 200 iterations.
    """
    y = series.counts.astype(float)
    n = len(y)
    if n < 3:
        raise InsufficientDataError(f"nonlinear fit needs >= 3 bins, got {n}")
    t = series.elapsed
    _check_abscissa(t)
    if not np.any(y != 0):
        return FitResult("nonlinear", 0.0, math.nan, 0.0, 1.0, n, [INSUFFICIENT_SIGNAL])

    x0, m = (init.x0, init.m) if init is not None else _initial_guess(series)
    # fit k = m * tau on s = t / tau; Marquardt scaling makes the path independent of tau
    tau = float(np.max(np.abs(t)))
    s = t / tau
    p = np.array([x0, m * tau], dtype=float)

    def residuals(q):
        with np.errstate(over="ignore", invalid="ignore"):
            return q[0] * np.exp(-q[1] * s) - y

    r = residuals(p)
    if not np.all(np.isfinite(r)):
        raise NumericalFailure("initial point gives non-finite residuals", (x0, m))
    ssr = float(r @ r)
    damping = INITIAL_DAMPING
    converged = ssr == 0.0
    iterations = 0
    while not converged and iterations < MAX_ITER:
        iterations += 1
        e = np.exp(-p[1] * s)
        jac = np.column_stack((e, -p[0] * s * e))
        if not np.all(np.isfinite(jac)):
            raise NumericalFailure("non-finite Jacobian", (float(p[0]), float(p[1] / tau)))
        jtj = jac.T @ jac
        grad = jac.T @ r
        scale = np.maximum(np.diag(jtj), np.finfo(float).tiny)
        try:
            step = np.linalg.solve(jtj + damping * np.diag(scale), -grad)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(jtj + damping * np.diag(scale), -grad, rcond=None)[0]
        if np.max(np.abs(step) / np.maximum(np.abs(p), np.finfo(float).tiny)) < REL_TOL:
            converged = True
            break
        trial = p + step
        r_trial = residuals(trial)
        if not np.all(np.isfinite(r_trial)):
            damping *= DAMPING_FACTOR
            if damping > _DAMPING_CEILING:
                raise NumericalFailure(
                    "residuals stay non-finite under maximal damping",
                    (float(p[0]), float(p[1] / tau)),
                )
            continue
        with np.errstate(over="ignore"):
            ssr_trial = float(r_trial @ r_trial)
        if ssr_trial < ssr:
            p, r, ssr = trial, r_trial, ssr_trial
            damping /= DAMPING_FACTOR
            converged = ssr == 0.0
        else:
            damping *= DAMPING_FACTOR

    x0, m = float(p[0]), float(p[1] / tau)
    warnings = []
    if not converged:
        warnings.append(f"iteration cap reached ({MAX_ITER} iterations)")
    if not m > 0:
        warnings.append(NO_FORGETTING)
    if x0 < 0:
        warnings.append("negative initial interest")
    rmse, r2 = _rmse_r2(y, _model(x0, m, t))
    return FitResult("nonlinear", x0, m, rmse, r2, n, warnings, iterations)


def fit(series: UsageSeries, method: str = "nonlinear") -> FitResult:
    if method == "loglinear":
        return fit_loglinear(series)
    if method == "nonlinear":
        return fit_nonlinear(series)
    raise ValueError(f"unknown method {method!r}")
