"""Heavy-tailed renewal dynamics: return-time law, wandering rate, visit sets.

The driving chain only matters through its zero-visit structure, so it is
modeled as a delayed renewal process. Gaps follow the survival function

    P(gap > m) = (m+1)^(-beta) * (1 + log(1+m))^(-kappa),   m >= 0,

which equals 1 at m=0 and is regularly varying of index -beta with a
one-parameter slowly varying correction (kappa=0 gives no correction).

A visit set on horizon ``n`` starts at an initial point ``m0`` with CDF
``P(m0 <= m) = w_m / w_n`` (the stationary delay for the conditioned
dynamics) and continues with i.i.d. renewal gaps until the horizon is
exceeded. Here ``w_m`` is the wandering-rate prefix sum, ``w_0 = 1`` and
``w_m = sum_{k=1..m} P(gap > k-1)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import kernels
from .errors import DomainError, ResourceLimitError

# Dense prefix tables beyond this horizon are refused (memory guardrail);
# scalar wandering values fall back to an Euler-Maclaurin tail instead.
MAX_DENSE = 2**23
# Exact summation head used to anchor the Euler-Maclaurin tail.
_EM_HEAD = 2**20


@dataclass(frozen=True)
class ReturnLaw:
    """Return-time (gap) distribution of the renewal dynamics."""

    beta: float
    kappa: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.beta < 1.0):
            raise ValueError(f"beta must be in (0,1), got {self.beta}")
        if self.kappa < 0.0:
            raise ValueError(f"kappa must be >= 0, got {self.kappa}")

    @classmethod
    def from_dict(cls, d: dict) -> "ReturnLaw":
        return cls(beta=float(d["beta"]), kappa=float(d.get("kappa", 0.0)))

    def sf(self, m) -> np.ndarray | float:
        """Survival function P(gap > m) for integer m >= 0."""
        m = np.asarray(m, dtype=np.float64)
        out = (m + 1.0) ** (-self.beta)
        if self.kappa != 0.0:
            out = out * (1.0 + np.log1p(m)) ** (-self.kappa)
        return out if out.ndim else float(out)

    def pmf(self, m) -> np.ndarray | float:
        """P(gap = m) = sf(m-1) - sf(m) for integer m >= 1."""
        m = np.asarray(m, dtype=np.float64)
        if np.any(m < 1):
            raise DomainError("gap pmf is supported on m >= 1")
        out = self.sf(m - 1.0) - self.sf(m)
        return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class VisitSet:
    """Zero-visit times of one conditioned renewal path on [0, n]."""

    n: int
    times: np.ndarray  # sorted distinct int64 in [0, n]

    def __post_init__(self):
        t = self.times
        if t.size == 0:
            raise ValueError("visit set must be nonempty")
        if t[0] < 0 or t[-1] > self.n or np.any(np.diff(t) <= 0):
            raise ValueError("visit times must be strictly increasing within [0, n]")

    def save(self, path) -> None:
        """Debug dump: newline-delimited integers."""
        np.savetxt(path, self.times, fmt="%d")


class WanderingTable:
    """Cached wandering-rate prefix sums for one return law.

    ``value(n)`` returns the scalar ``w_n`` for any horizon (Euler-Maclaurin
    tail above the dense head, exact below); ``prefix(n)`` returns the dense
    array ``W[0..n]`` needed by the samplers and refuses horizons above
    ``MAX_DENSE``.
    """

    def __init__(self, law: ReturnLaw):
        self.law = law
        self._dense = np.array([1.0, 1.0])  # w_0 = 1, w_1 = sf(0) = 1

    def _grow(self, n: int) -> None:
        have = self._dense.size - 1
        if n <= have:
            return
        size = self._dense.size
        while size - 1 < n:
            size *= 2
        size = min(size, MAX_DENSE + 1)
        k = np.arange(have + 1, size, dtype=np.float64)
        ext = self._dense[have] + np.cumsum(self.law.sf(k - 1.0))
        self._dense = np.concatenate([self._dense, ext])

    def prefix(self, n: int) -> np.ndarray:
        """Dense table W with W[m] = w_m for m = 0..n."""
        if n < 1:
            raise DomainError("prefix table needs n >= 1")
        if n > MAX_DENSE:
            raise ResourceLimitError(
                f"dense wandering table for n={n} exceeds the {MAX_DENSE} cap"
            )
        self._grow(n)
        return self._dense[: n + 1]

    def _em_tail(self, a: int, n: int) -> float:
        # sum_{k=a+1}^{n} f(k) with f(k) = sf(k-1); Euler-Maclaurin through
        # the f'/12 term, error negligible for a >= 2**20.
        beta, kappa = self.law.beta, self.law.kappa

        def f(x):
            out = x ** (-beta)
            if kappa != 0.0:
                out = out * (1.0 + np.log(x)) ** (-kappa)
            return out

        def fp(x):
            if kappa == 0.0:
                return -beta * x ** (-beta - 1.0)
            lg = 1.0 + np.log(x)
            return -x ** (-beta - 1.0) * lg ** (-kappa) * (beta + kappa / lg)

        lo, hi = a + 1.0, float(n)
        if kappa == 0.0:
            integral = (hi ** (1.0 - beta) - lo ** (1.0 - beta)) / (1.0 - beta)
        else:
            # substitute x = e^u to tame the power-law range
            integral, _ = quad(
                lambda u: np.exp((1.0 - beta) * u) * (1.0 + u) ** (-kappa),
                np.log(lo),
                np.log(hi),
                epsabs=0.0,
                epsrel=1e-12,
                limit=400,
            )
        return integral + 0.5 * (f(lo) + f(hi)) + (fp(hi) - fp(lo)) / 12.0

    def value(self, n: int) -> float:
        """Scalar w_n for any n >= 0."""
        if n < 0:
            raise DomainError("wandering rate needs n >= 0")
        if n <= _EM_HEAD:
            self._grow(n)
            return float(self._dense[n])
        self._grow(_EM_HEAD)
        return float(self._dense[_EM_HEAD]) + self._em_tail(_EM_HEAD, n)


def wandering(table: WanderingTable, n: int) -> float:
    """w_n under the table's law."""
    return table.value(n)


# ---------------------------------------------------------------------------
# Samplers. The scalar reference implementations below draw uniforms in the
# same order as the numba kernels (one per decision), so they serve as an
# independent check of the fast paths.
# ---------------------------------------------------------------------------


def sample_phi(law: ReturnLaw, rng: np.random.Generator) -> int:
    """Draw one renewal gap; P(gap > m) = law.sf(m) exactly."""
    return int(kernels.phi_batch(law.beta, law.kappa, 1, rng)[0])


def sample_phi_ref(law: ReturnLaw, rng: np.random.Generator) -> int:
    """Pure-python reference gap sampler (same draw order as the kernels)."""
    u = max(rng.random(), 1e-300)
    if law.kappa == 0.0:
        lt = -np.log(u) / law.beta
        if lt > 42.5:
            return kernels.GAP_CAP
        return max(1, int(np.floor(np.exp(lt))))
    lo = 1
    if law.sf(lo) < u:
        return lo
    hi = 2
    while law.sf(hi) >= u:
        lo = hi
        hi *= 2
        if hi >= kernels.GAP_CAP:
            return kernels.GAP_CAP
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if law.sf(mid) < u:
            hi = mid
        else:
            lo = mid
    return hi


def sample_visit_set(
    law: ReturnLaw, n: int, rng: np.random.Generator, table: WanderingTable | None = None
) -> VisitSet:
    """Sample the zero-visit set I on horizon n (delayed renewal range)."""
    if n < 1:
        raise DomainError("horizon must be >= 1")
    table = table if table is not None else WanderingTable(law)
    W = table.prefix(n)
    times = kernels.visit_times(W, law.beta, law.kappa, n, rng)
    return VisitSet(n=n, times=np.asarray(times, dtype=np.int64))


def sojourn_count(law: ReturnLaw, n: int, rng: np.random.Generator) -> int:
    """Reference: number of renewal points of a walk from 0 inside [0, n]."""
    cnt = 1
    s = 0
    while True:
        step = sample_phi_ref(law, rng)
        if step > n - s:
            return cnt
        s += step
        cnt += 1


def point_hit(law: ReturnLaw, n: int, rng: np.random.Generator) -> bool:
    """Reference: does the renewal range from 0 contain the point n?"""
    s = 0
    while s < n:
        s += sample_phi_ref(law, rng)
    return s == n


def mean_sojourn_mc(
    law: ReturnLaw, n: int, reps: int, rng: np.random.Generator
) -> tuple[float, float]:
    """Monte Carlo mean (and standard error) of the sojourn count in [0, n]."""
    if reps < 2:
        raise ValueError("reps must be >= 2")
    counts = kernels.sojourn_counts(law.beta, law.kappa, n, reps, rng)
    counts = np.asarray(counts, dtype=np.float64)
    est = float(counts.mean())
    se = float(counts.std(ddof=1) / np.sqrt(reps))
    return est, se


def hit_prob_mc(
    law: ReturnLaw, n: int, reps: int, rng: np.random.Generator
) -> tuple[float, float]:
    """Monte Carlo estimate of P(the renewal range from 0 contains n)."""
    hits = int(kernels.hit_count(law.beta, law.kappa, n, reps, rng))
    p = hits / reps
    se = float(np.sqrt(max(p * (1.0 - p), 1.0 / reps) / reps))
    return p, se


def _check_window(n: int, interval: tuple[float, float]) -> tuple[float, float]:
    a, b = interval
    if not (0.0 <= a < b <= 1.0):
        raise DomainError(f"interval must satisfy 0 <= a < b <= 1, got {interval}")
    return n * a, n * b


def intersection_prob_mc(
    law: ReturnLaw,
    n: int,
    interval: tuple[float, float],
    reps: int,
    rng: np.random.Generator,
    table: WanderingTable | None = None,
) -> tuple[float, float]:
    """P(two independent visit sets share a time strictly inside n*(a,b))."""
    lo, hi = _check_window(n, interval)
    table = table if table is not None else WanderingTable(law)
    W = table.prefix(n)
    cnt = int(kernels.intersect_count(W, law.beta, law.kappa, n, lo, hi, reps, rng))
    p = cnt / reps
    se = float(np.sqrt(max(p * (1.0 - p), 1.0 / reps) / reps))
    return p, se


def quenched_intersection_mc(
    law: ReturnLaw,
    n: int,
    interval: tuple[float, float],
    inner_reps: int,
    rng: np.random.Generator,
    table: WanderingTable | None = None,
) -> float:
    """One quenched intersection probability: condition on a sampled set."""
    if inner_reps < 100:
        raise ValueError("inner_reps < 100 is too noisy to be meaningful")
    lo, hi = _check_window(n, interval)
    table = table if table is not None else WanderingTable(law)
    W = table.prefix(n)
    out = kernels.quenched_estimates(
        W, law.beta, law.kappa, n, lo, hi, 1, inner_reps, rng
    )
    return float(out[0])


def quenched_intersection_batch(
    law: ReturnLaw,
    n: int,
    interval: tuple[float, float],
    outer: int,
    inner_reps: int,
    rng: np.random.Generator,
    table: WanderingTable | None = None,
) -> np.ndarray:
    """Batch of quenched intersection estimates (one per conditioning set)."""
    if inner_reps < 100:
        raise ValueError("inner_reps < 100 is too noisy to be meaningful")
    lo, hi = _check_window(n, interval)
    table = table if table is not None else WanderingTable(law)
    W = table.prefix(n)
    return np.asarray(
        kernels.quenched_estimates(
            W, law.beta, law.kappa, n, lo, hi, outer, inner_reps, rng
        )
    )
