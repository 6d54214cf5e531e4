"""Dispatch layer over the numba / numpy kernel implementations.

Every function forwards to the module selected by the active backend (see
:mod:`extremal._backend`). The numba module is imported lazily so the
compile cost is only paid when those kernels are actually used.
"""

from __future__ import annotations

from ._backend import get_backend

GAP_CAP = 2**62


def _impl():
    if get_backend() == "numba":
        from . import _kernels_nb as mod
    else:
        from . import _kernels_np as mod
    return mod


def phi_batch(beta, kappa, size, rng):
    return _impl().phi_batch(beta, kappa, size, rng)


def visit_times(W, beta, kappa, n, rng):
    return _impl().visit_times(W, beta, kappa, n, rng)


def visit_min_batch(W, n, reps, rng):
    return _impl().visit_min_batch(W, n, reps, rng)


def sojourn_counts(beta, kappa, n, reps, rng):
    return _impl().sojourn_counts(beta, kappa, n, reps, rng)


def hit_count(beta, kappa, n, reps, rng):
    return _impl().hit_count(beta, kappa, n, reps, rng)


def intersect_count(W, beta, kappa, n, lo, hi, reps, rng):
    return _impl().intersect_count(W, beta, kappa, n, lo, hi, reps, rng)


def quenched_estimates(W, beta, kappa, n, lo, hi, outer, inner, rng):
    return _impl().quenched_estimates(W, beta, kappa, n, lo, hi, outer, inner, rng)


def measure_values(W, beta, N, qa, qb, jmax, reps, rng):
    return _impl().measure_values(W, beta, N, qa, qb, jmax, reps, rng)


def path_pairs(W, beta, kappa, n, v, rng):
    return _impl().path_pairs(W, beta, kappa, n, v, rng)
