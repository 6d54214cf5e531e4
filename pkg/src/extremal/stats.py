"""Statistical utilities for the experiment harness.

Fixed-distance KS comparisons (no p-values: thresholds compose transparently
with discretization allowances), log-log slope fits, and normal-approximation
binomial intervals.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError


def as_sample(data) -> np.ndarray:
    """Sorted, finite 1-d sample array."""
    x = np.asarray(data, dtype=np.float64).ravel()
    if x.size == 0:
        raise DomainError("sample must be nonempty")
    if not np.all(np.isfinite(x)):
        raise DomainError("sample must be finite")
    return np.sort(x)


def ks_one_sample(data, cdf) -> float:
    """Sup distance between the empirical CDF of data and a target CDF."""
    x = as_sample(data)
    n = x.size
    f = np.asarray(cdf(x), dtype=np.float64)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def ks_two_sample(a, b) -> float:
    """Sup distance between two empirical CDFs (merge scan)."""
    xa, xb = as_sample(a), as_sample(b)
    grid = np.concatenate([xa, xb])
    fa = np.searchsorted(xa, grid, side="right") / xa.size
    fb = np.searchsorted(xb, grid, side="right") / xb.size
    return float(np.max(np.abs(fa - fb)))


def loglog_slope(xs, ys) -> tuple[float, float]:
    """OLS slope (and stderr) of log y against log x."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.size < 3 or x.size != y.size:
        raise DomainError("need at least 3 matching points")
    if np.any(x <= 0.0) or np.any(y <= 0.0):
        raise DomainError("log-log fit needs positive data")
    lx, ly = np.log(x), np.log(y)
    lx_c = lx - lx.mean()
    sxx = float(np.dot(lx_c, lx_c))
    if sxx == 0.0:
        raise DomainError("x values must not be all equal")
    slope = float(np.dot(lx_c, ly) / sxx)
    resid = ly - ly.mean() - slope * lx_c
    dof = x.size - 2
    sigma2 = float(np.dot(resid, resid)) / dof if dof > 0 else 0.0
    return slope, float(np.sqrt(sigma2 / sxx))


def binomial_ci(successes: int, trials: int, z: float) -> tuple[float, float]:
    """Normal-approximation interval p_hat +- z sqrt(p(1-p)/n), clipped."""
    if trials < 1 or successes < 0 or successes > trials:
        raise DomainError("need 0 <= successes <= trials, trials >= 1")
    p = successes / trials
    half = z * np.sqrt(p * (1.0 - p) / trials)
    return max(0.0, p - half), min(1.0, p + half)
