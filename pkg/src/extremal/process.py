"""Exact simulation of the positive-jump part of the stationary process.

A path on {0,...,n} is a Poisson series: arrivals Gamma_j below the level
w_n * nu_bar(x0) each contribute the jump size V(w_n / Gamma_j) at every
time of an independent visit set. Termination is exact, not a tolerance:
arrivals at or above that level would map to a zero jump under the
truncated quantile transform, so they are never generated.

Values are accumulated sparsely as (time, value) pairs and combined in a
canonical (time, value) sort order, which makes path values independent of
the order in which series terms were generated.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .errors import DomainError, ResourceLimitError
from .renewal import ReturnLaw, WanderingTable
from .supmeasure import IntervalFamily
from .tails import NormalizingSequences, TailModel, quantile_V_log

MAX_EXPECTED_TERMS = 1e7
MIN_HORIZON = 100
_GAMMA_CHUNK = 4096


@dataclass(frozen=True)
class PathSample:
    """Sparse path: strictly increasing times with positive values.

    Times not stored carry the implicit value 0.
    """

    n: int
    times: np.ndarray
    values: np.ndarray
    term_count: int

    def __post_init__(self):
        if self.times.size != self.values.size:
            raise ValueError("times and values must match")
        if self.times.size:
            if self.times[0] < 0 or self.times[-1] > self.n:
                raise ValueError("times must lie in [0, n]")
            if np.any(np.diff(self.times) <= 0):
                raise ValueError("times must be strictly increasing")
            if np.any(self.values <= 0.0):
                raise ValueError("stored values must be positive")

    def to_csv(self, path) -> None:
        """Flag-gated export: (time, value) rows with full precision."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("time,value\n")
            for t, v in zip(self.times, self.values):
                fh.write(f"{int(t)},{v:.17g}\n")


@dataclass(frozen=True)
class EmpiricalSupMeasure:
    """Per-interval maxima of one path, optionally normalized."""

    intervals: IntervalFamily
    raw: np.ndarray
    normalized: np.ndarray | None = None

    def __post_init__(self):
        if self.raw.size != self.intervals.count:
            raise ValueError("raw values must match the interval family")
        if np.any(self.raw < 0.0):
            raise ValueError("raw maxima cannot be negative")


def _draw_gammas(level: float, rng: np.random.Generator) -> np.ndarray:
    """Poisson arrival times strictly below `level`."""
    parts = []
    offset = 0.0
    while True:
        chunk = offset + np.cumsum(rng.standard_exponential(_GAMMA_CHUNK))
        k = int(np.searchsorted(chunk, level, side="left"))
        parts.append(chunk[:k])
        if k < _GAMMA_CHUNK:
            return np.concatenate(parts)
        offset = float(chunk[-1])


def combine_pairs(times: np.ndarray, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sum values sharing a time, in canonical (time, value) order."""
    if times.size == 0:
        return times.astype(np.int64), values
    order = np.lexsort((values, times))
    t = times[order]
    v = values[order]
    starts = np.concatenate(([0], np.flatnonzero(np.diff(t)) + 1))
    return t[starts], np.add.reduceat(v, starts)


def expected_terms(model: TailModel, law: ReturnLaw, n: int, table=None) -> float:
    """Mean number of series terms: w_n * nu_bar(x0)."""
    table = table if table is not None else WanderingTable(law)
    return table.value(n) * model.nu_bar_x0


def simulate_path(
    model: TailModel,
    law: ReturnLaw,
    n: int,
    rng: np.random.Generator,
    table: WanderingTable | None = None,
) -> PathSample:
    """Draw one exact path of the positive-jump process on {0,...,n}."""
    if n < MIN_HORIZON:
        raise DomainError(f"horizon must be >= {MIN_HORIZON}")
    table = table if table is not None else WanderingTable(law)
    level = expected_terms(model, law, n, table=table)
    if level > MAX_EXPECTED_TERMS:
        raise ResourceLimitError(
            f"expected {level:.3g} series terms exceeds the {MAX_EXPECTED_TERMS:.0g} cap"
        )
    W = table.prefix(n)
    w_n = float(W[n])
    gammas = _draw_gammas(level, rng)
    if gammas.size == 0:
        return PathSample(
            n=n,
            times=np.empty(0, np.int64),
            values=np.empty(0, np.float64),
            term_count=0,
        )
    v = np.asarray(quantile_V_log(model, np.log(w_n) - np.log(gammas)))
    ts, vs = kernels.path_pairs(W, law.beta, law.kappa, n, v, rng)
    times, values = combine_pairs(np.asarray(ts), np.asarray(vs))
    return PathSample(n=n, times=times, values=values, term_count=int(gammas.size))


def sup_measure_eval(path: PathSample, intervals: IntervalFamily) -> EmpiricalSupMeasure:
    """Raw maxima over open intervals: max of X_t for t in n*(a, b), else 0."""
    raw = np.empty(intervals.count)
    for i in range(intervals.count):
        lo = int(np.searchsorted(path.times, path.n * intervals.a[i], side="right"))
        hi = int(np.searchsorted(path.times, path.n * intervals.b[i], side="left"))
        raw[i] = float(path.values[lo:hi].max()) if hi > lo else 0.0
    return EmpiricalSupMeasure(intervals=intervals, raw=raw)


def path_max(path: PathSample, t: float = 1.0) -> float:
    """Maximum over the closed range [0, n*t]; 0 when no time is stored."""
    if t <= 0.0:
        raise DomainError("t must be positive")
    hi = int(np.searchsorted(path.times, path.n * t, side="right"))
    return float(path.values[:hi].max()) if hi > 0 else 0.0


def normalize(raw: EmpiricalSupMeasure, norm: NormalizingSequences) -> EmpiricalSupMeasure:
    """Affine rescale (M - b_n) / a_n per interval."""
    if norm.a_n <= 0.0:
        raise DomainError("a_n must be positive")
    return replace(raw, normalized=(raw.raw - norm.b_n) / norm.a_n)


def running_max_path(path: PathSample, grid) -> np.ndarray:
    """Running maxima max_{s <= n t} X_s along an increasing grid in (0, 1]."""
    g = np.asarray(grid, dtype=np.float64)
    if g.size == 0 or np.any(np.diff(g) <= 0.0) or g[0] <= 0.0 or g[-1] > 1.0:
        raise DomainError("grid must be increasing within (0, 1]")
    if path.times.size == 0:
        return np.zeros(g.size)
    prefix = np.maximum.accumulate(path.values)
    idx = np.searchsorted(path.times, path.n * g, side="right")
    out = np.zeros(g.size)
    pos = idx > 0
    out[pos] = prefix[idx[pos] - 1]
    return out
