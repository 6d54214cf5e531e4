"""Finite-resolution approximations of shifted stable regenerative sets.

A sampled renewal visit set on horizon N, rescaled by 1/N, converges weakly
(as a random closed subset of [0,1]) to the restriction of a shifted
regenerative set. That rescaled discrete set is the approximation used
everywhere here; its shift (the minimum point) has CDF x^(1-beta) in the
limit, which the samplers reproduce up to grid resolution.

Interval hits use open intervals; closed targets [a, b] are queried as
(a - eps, b + eps) with eps = 1/(2N) to absorb grid-boundary artifacts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError
from .renewal import ReturnLaw, WanderingTable

MIN_RESOLUTION = 1000


@dataclass(frozen=True)
class RegenSetApprox:
    """Rescaled visit set: sorted points in [0,1] at resolution 1/N."""

    resolution: int
    points: np.ndarray

    def __post_init__(self):
        p = self.points
        if p.size == 0:
            raise ValueError("approximation must be nonempty")
        if p[0] < 0.0 or p[-1] > 1.0 or np.any(np.diff(p) <= 0.0):
            raise ValueError("points must be strictly increasing within [0,1]")

    @property
    def shift(self) -> float:
        return float(self.points[0])

    def dump(self) -> str:
        """Debug form: sorted decimal list, one point per line."""
        return "\n".join(f"{p:.12f}" for p in self.points)


def sample_regen_set(
    beta: float,
    N: int,
    rng: np.random.Generator,
    table: WanderingTable | None = None,
) -> RegenSetApprox:
    """Sample one approximation at resolution N (N >= 1000)."""
    if N < MIN_RESOLUTION:
        raise DomainError(f"resolution N must be >= {MIN_RESOLUTION}")
    law = ReturnLaw(beta=beta, kappa=0.0)
    table = table if table is not None else WanderingTable(law)
    W = table.prefix(N)
    times = kernels.visit_times(W, beta, 0.0, N, rng)
    return RegenSetApprox(resolution=N, points=np.asarray(times, dtype=np.float64) / N)


def hits_interval(regen: RegenSetApprox, a: float, b: float) -> bool:
    """True iff some point lies strictly inside (a, b)."""
    if a >= b:
        raise DomainError(f"need a < b, got ({a}, {b})")
    idx = int(np.searchsorted(regen.points, a, side="right"))
    return idx < regen.points.size and regen.points[idx] < b


def hits_closed(regen: RegenSetApprox, a: float, b: float) -> bool:
    """Closed-interval query via the half-grid-widened open interval."""
    eps = 0.5 / regen.resolution
    return hits_interval(regen, a - eps, b + eps)


def disjointness_mc(
    beta: float,
    N: int,
    reps: int,
    rng: np.random.Generator,
    table: WanderingTable | None = None,
) -> float:
    """Probability two independent approximations share a grid point.

    Only meaningful in the regime beta < 1/2 where the limiting sets are
    almost surely disjoint; the estimate decays like N^(2 beta - 1).
    """
    if not 0.0 < beta < 0.5:
        raise DomainError("disjointness check requires beta in (0, 0.5)")
    if N < MIN_RESOLUTION:
        raise DomainError(f"resolution N must be >= {MIN_RESOLUTION}")
    law = ReturnLaw(beta=beta, kappa=0.0)
    table = table if table is not None else WanderingTable(law)
    W = table.prefix(N)
    cnt = int(
        kernels.intersect_count(W, beta, 0.0, N, -1.0, N + 1.0, reps, rng)
    )
    return cnt / reps
