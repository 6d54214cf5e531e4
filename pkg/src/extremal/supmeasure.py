"""The limiting random sup-measure and its closed-form laws.

On [0,1] the limit object has the representation

    M(B) = sup_j ( -log Gamma_j ) 1{ B intersects R_j },

with Gamma_j the arrival times of a unit-rate Poisson process and R_j
i.i.d. shifted regenerative sets. Levels decrease in j, so the first
hitting set decides each interval's value and sampling stops early.
Unhit intervals (possible only when the arrival budget J_max runs out)
carry value -inf; ``truncated`` reports that this happened.

Closed forms: M([0,t]) is Gumbel with scale t^(1-beta); joint laws over
nested [0,t_i] follow the time-changed Gumbel extremal process.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError
from .regen import MIN_RESOLUTION, RegenSetApprox, hits_interval
from .renewal import ReturnLaw, WanderingTable
from .stats import ks_two_sample

DEFAULT_J_MAX = 10_000


@dataclass(frozen=True)
class IntervalFamily:
    """Disjoint open intervals (a_i, b_i) within (0, 1], sorted."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a, b = self.a, self.b
        if a.size == 0 or a.size != b.size:
            raise ValueError("need matching nonempty bound arrays")
        if np.any(a >= b) or np.any(a < 0.0) or np.any(b > 1.0):
            raise ValueError("intervals must satisfy 0 <= a < b <= 1")
        if np.any(b[:-1] > a[1:]):
            raise ValueError("intervals must be sorted and pairwise disjoint")

    @classmethod
    def of(cls, intervals) -> "IntervalFamily":
        arr = np.asarray(intervals, dtype=np.float64).reshape(-1, 2)
        return cls(a=arr[:, 0].copy(), b=arr[:, 1].copy())

    @property
    def count(self) -> int:
        return int(self.a.size)


def _queries(intervals: IntervalFamily, N: int, closed: bool) -> tuple[np.ndarray, np.ndarray]:
    # point-space query bounds; closed targets widen by half a grid step
    eps = 0.5 if closed else 0.0
    return N * intervals.a - eps, N * intervals.b + eps


@dataclass(frozen=True)
class LimitSupMeasureSample:
    """One draw of the limit sup-measure on an interval family."""

    intervals: IntervalFamily
    levels: np.ndarray  # strictly decreasing -log Gamma_j, one per generated set
    sets: list[RegenSetApprox]
    values: np.ndarray  # per interval; -inf when unhit
    truncated: bool

    def __post_init__(self):
        if np.any(np.diff(self.levels) >= 0.0):
            raise ValueError("levels must be strictly decreasing")
        if not self.truncated and not np.all(np.isfinite(self.values)):
            raise ValueError("untruncated samples must assign every interval")


def sample_limit_measure(
    beta: float,
    intervals: IntervalFamily,
    N: int,
    rng: np.random.Generator,
    J_max: int = DEFAULT_J_MAX,
    closed: bool = False,
    table: WanderingTable | None = None,
) -> LimitSupMeasureSample:
    """Sample the measure once, keeping levels and sets for inspection.

    For replicate loops use :func:`sample_measure_values`, which skips the
    per-set bookkeeping.
    """
    if J_max < 1:
        raise DomainError("J_max must be >= 1")
    if N < MIN_RESOLUTION:
        raise DomainError(f"resolution N must be >= {MIN_RESOLUTION}")
    law = ReturnLaw(beta=beta, kappa=0.0)
    table = table if table is not None else WanderingTable(law)
    W = table.prefix(N)
    qa, qb = _queries(intervals, N, closed)

    levels: list[float] = []
    sets: list[RegenSetApprox] = []
    values = np.full(intervals.count, -np.inf)
    gamma = 0.0
    pending = set(range(intervals.count))
    for _ in range(J_max):
        gamma += rng.standard_exponential()
        level = -np.log(gamma)
        times = np.asarray(kernels.visit_times(W, beta, 0.0, N, rng), dtype=np.int64)
        levels.append(level)
        sets.append(RegenSetApprox(resolution=N, points=times / N))
        for q in list(pending):
            k = int(np.searchsorted(times, qa[q], side="right"))
            if k < times.size and times[k] < qb[q]:
                values[q] = level
                pending.discard(q)
        if not pending:
            break
    return LimitSupMeasureSample(
        intervals=intervals,
        levels=np.asarray(levels),
        sets=sets,
        values=values,
        truncated=bool(pending),
    )


def sample_measure_values(
    beta: float,
    intervals: IntervalFamily,
    N: int,
    reps: int,
    rng: np.random.Generator,
    J_max: int = DEFAULT_J_MAX,
    closed: bool = False,
    table: WanderingTable | None = None,
) -> tuple[np.ndarray, int]:
    """Replicate draws of per-interval values; returns (reps x m, truncations)."""
    if J_max < 1:
        raise DomainError("J_max must be >= 1")
    if N < MIN_RESOLUTION:
        raise DomainError(f"resolution N must be >= {MIN_RESOLUTION}")
    law = ReturnLaw(beta=beta, kappa=0.0)
    table = table if table is not None else WanderingTable(law)
    W = table.prefix(N)
    qa, qb = _queries(intervals, N, closed)
    vals, trunc = kernels.measure_values(W, beta, N, qa, qb, J_max, reps, rng)
    return np.asarray(vals), int(trunc)


# ---------------------------------------------------------------------------
# closed-form laws
# ---------------------------------------------------------------------------


def gumbel_marginal_cdf(t: float, x, beta: float) -> np.ndarray | float:
    """CDF of the measure of [0, t]: exp(-t^(1-beta) e^(-x))."""
    if t <= 0.0:
        raise DomainError("t must be positive")
    x = np.asarray(x, dtype=np.float64)
    out = np.exp(-(t ** (1.0 - beta)) * np.exp(-x))
    return float(out) if out.ndim == 0 else out


def extremal_fdd_cdf(times, xs, beta: float) -> float:
    """Joint CDF of the running maximum at increasing times.

    P(M([0,t_i]) <= x_i for all i) for 0 < t_1 < ... < t_k and
    nondecreasing thresholds x_i: the Gumbel extremal process law under the
    time change t -> t^(1-beta).
    """
    t = np.asarray(times, dtype=np.float64)
    x = np.asarray(xs, dtype=np.float64)
    if t.size == 0 or t.size != x.size:
        raise DomainError("need matching nonempty times and thresholds")
    if t[0] <= 0.0 or np.any(np.diff(t) <= 0.0):
        raise DomainError("times must be positive and strictly increasing")
    if np.any(np.diff(x) < 0.0):
        raise DomainError("thresholds must be nondecreasing")
    tb = t ** (1.0 - beta)
    increments = np.diff(np.concatenate(([0.0], tb)))
    return float(np.exp(-np.sum(increments * np.exp(-x))))


# ---------------------------------------------------------------------------
# distributional symmetry checks
# ---------------------------------------------------------------------------


def self_affinity_check(
    beta: float,
    a: float,
    t0: float,
    samples: int,
    N: int,
    rng: np.random.Generator,
    J_max: int = DEFAULT_J_MAX,
) -> float:
    """Two-sample KS distance probing the scaling law of the measure.

    Compares M([0, a t0]) against M([0, t0]) + (1-beta) log a on
    independent replicate batches.
    """
    if not 0.0 < a <= 1.0 or not 0.0 < t0 <= 1.0 or a * t0 <= 0.0:
        raise DomainError("need a in (0,1], t0 in (0,1]")
    left = IntervalFamily.of([[0.0, a * t0]])
    right = IntervalFamily.of([[0.0, t0]])
    va, _ = sample_measure_values(beta, left, N, samples, rng, J_max=J_max, closed=True)
    vb, _ = sample_measure_values(beta, right, N, samples, rng, J_max=J_max, closed=True)
    shifted = vb[:, 0] + (1.0 - beta) * np.log(a)
    return ks_two_sample(va[:, 0], shifted)


def stationarity_check(
    beta: float,
    r: float,
    t: float,
    samples: int,
    N: int,
    rng: np.random.Generator,
    J_max: int = DEFAULT_J_MAX,
) -> float:
    """Two-sample KS distance between M((r, r+t)) and M((0, t))."""
    if r < 0.0 or t <= 0.0 or r + t > 1.0:
        raise DomainError("need r >= 0, t > 0, r + t <= 1")
    left = IntervalFamily.of([[r, r + t]])
    right = IntervalFamily.of([[0.0, t]])
    va, _ = sample_measure_values(beta, left, N, samples, rng, J_max=J_max)
    vb, _ = sample_measure_values(beta, right, N, samples, rng, J_max=J_max)
    return ks_two_sample(va[:, 0], vb[:, 0])
