"""Log-log rate fitting for solver traces.

Convergence guarantees here are power laws, so the empirical check is a
least-squares fit of ``log(metric)`` against ``log(t)`` over a trailing
window of the trace.  Early iterates reflect transients rather than the
asymptotic regime, so fits exclude a burn-in prefix by default.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from ..exceptions import DomainError

__all__ = ["RateFit", "fit_rate", "fit_rate_points", "default_burn_in",
           "load_trace_csv", "MIN_FIT_POINTS"]

MIN_FIT_POINTS = 10


@dataclass(frozen=True)
class RateFit:
    """Fitted slope of log(metric) vs log(t) over [t_min, t_max]."""

    metric: str
    slope: float
    intercept: float
    r_squared: float
    t_range: tuple[float, float]
    points: int

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "t_min": self.t_range[0],
            "t_max": self.t_range[1],
            "points": self.points,
        }


def default_burn_in(t_final: float) -> float:
    """Default fit start: iterations before max(10, T/100) are transients."""
    return max(10.0, t_final / 100.0)


def fit_rate_points(ts, values, metric: str = "metric",
                    t_min: float | None = None,
                    t_max: float | None = None) -> RateFit:
    """Least-squares power-law fit on explicit (t, value) samples.

    Only samples with ``t_min <= t <= t_max``, ``t > 0`` and ``value > 0``
    enter the fit; fewer than ``MIN_FIT_POINTS`` usable samples raises
    :class:`DomainError` (the fit is unavailable, not zero).
    """
    ts = np.asarray(ts, dtype=float)
    values = np.asarray(values, dtype=float)
    if ts.shape != values.shape:
        raise DomainError("rate fit needs matching t and metric arrays")
    if t_max is None:
        t_max = float(ts.max()) if ts.size else 0.0
    if t_min is None:
        t_min = default_burn_in(t_max)
    keep = (ts >= t_min) & (ts <= t_max) & (ts > 0) & np.isfinite(values) & (values > 0)
    ts, values = ts[keep], values[keep]
    if ts.size < MIN_FIT_POINTS:
        raise DomainError(
            f"rate fit for {metric!r} unavailable: {ts.size} usable points in "
            f"t in [{t_min:g}, {t_max:g}] (need >= {MIN_FIT_POINTS})")
    x = np.log(ts)
    y = np.log(values)
    if float(np.ptp(y)) <= 1e-12 * max(1.0, float(np.max(np.abs(y)))):
        # Constant metric: zero variance to explain, the flat fit is exact.
        slope, intercept, r2 = 0.0, float(y.mean()), 1.0
    else:
        slope, intercept = np.polyfit(x, y, 1)
        resid = y - (slope * x + intercept)
        ss_res = float(np.dot(resid, resid))
        ss_tot = float(np.dot(y - y.mean(), y - y.mean()))
        r2 = 1.0 - ss_res / ss_tot
    r2 = min(1.0, max(0.0, r2))
    return RateFit(metric=metric, slope=float(slope), intercept=float(intercept),
                   r_squared=r2, t_range=(float(t_min), float(t_max)),
                   points=int(ts.size))


def fit_rate(trace, metric: str, t_min: float | None = None,
             t_max: float | None = None) -> RateFit:
    """Fit a power-law exponent for one recorded metric of a run trace.

    ``trace`` is a :class:`~rvikit.solvers.RunTrace` or any object with
    ``ts()`` and ``metric(name)`` accessors.
    """
    return fit_rate_points(trace.ts(), trace.metric(metric), metric=metric,
                           t_min=t_min, t_max=t_max)


def load_trace_csv(path) -> dict[str, np.ndarray]:
    """Read a trace CSV back into float column arrays (blank cells -> nan)."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise DomainError(f"{path}: empty trace file")
        columns: dict[str, list[float]] = {name: [] for name in reader.fieldnames}
        for row in reader:
            for name in reader.fieldnames:
                cell = row.get(name, "")
                columns[name].append(float(cell) if cell not in ("", None) else math.nan)
    return {name: np.asarray(vals, dtype=float) for name, vals in columns.items()}
