"""Vectorized pure-numpy fallback for the sampling kernels.

Mirror of :mod:`extremal._kernels_nb`. Same distributions, different random
stream consumption (batched draws), so a fixed seed reproduces results only
within this backend.
"""

from __future__ import annotations

import numpy as np

GAP_CAP = np.int64(2) ** 62
_GAP_CAP_F = float(2**62)


def phi_batch(beta, kappa, size, rng):
    u = np.maximum(rng.random(size), 1e-300)
    with np.errstate(over="ignore"):
        t = u ** (-1.0 / beta)
    t = np.where(np.isfinite(t), np.minimum(t, _GAP_CAP_F), _GAP_CAP_F)
    phi0 = np.maximum(np.floor(t).astype(np.int64), 1)
    if kappa == 0.0:
        return phi0
    # kappa > 0 thins the tail, so the kappa=0 draw brackets from above;
    # bisect for the smallest m >= 1 with sf(m) < u.
    lo = np.ones(size, np.int64)
    hi = phi0
    while True:
        live = lo < hi
        if not live.any():
            break
        mid = (lo + hi) // 2
        sf = (mid + 1.0) ** (-beta) * (1.0 + np.log(mid + 1.0)) ** (-kappa)
        take = live & (sf < u)
        hi = np.where(take, mid, hi)
        lo = np.where(live & ~take, mid + 1, lo)
    return hi


def _initial_points(W, n, count, rng):
    return np.searchsorted(W, rng.random(count) * W[n]).astype(np.int64)


def visit_times(W, beta, kappa, n, rng, _chunk=16):
    m0 = int(_initial_points(W, n, 1, rng)[0])
    parts = [np.array([m0], np.int64)]
    cur = m0
    while True:
        gaps = np.minimum(phi_batch(beta, kappa, _chunk, rng), n + 1)
        cs = cur + np.cumsum(gaps)
        k = int(np.searchsorted(cs, n, side="right"))
        parts.append(cs[:k])
        if k < _chunk:
            break
        cur = int(cs[-1])
    return np.concatenate(parts)


def visit_min_batch(W, n, reps, rng):
    return _initial_points(W, n, reps, rng)


def sojourn_counts(beta, kappa, n, reps, rng):
    s = np.zeros(reps, np.int64)
    counts = np.ones(reps, np.int64)
    active = np.arange(reps)
    while active.size:
        gaps = np.minimum(phi_batch(beta, kappa, active.size, rng), n + 1)
        nxt = s[active] + gaps
        s[active] = nxt
        alive = nxt <= n
        counts[active[alive]] += 1
        active = active[alive]
    return counts


def hit_count(beta, kappa, n, reps, rng):
    if n == 0:
        return np.int64(reps)
    s = np.zeros(reps, np.int64)
    hits = 0
    active = np.arange(reps)
    while active.size:
        gaps = np.minimum(phi_batch(beta, kappa, active.size, rng), n + 1)
        nxt = s[active] + gaps
        s[active] = nxt
        hits += int(np.count_nonzero(nxt == n))
        active = active[nxt < n]
    return np.int64(hits)


def _common_point_inside(t1, t2, lo, hi):
    common = np.intersect1d(t1, t2, assume_unique=True)
    if common.size == 0:
        return False
    return bool(np.any((common > lo) & (common < hi)))


def intersect_count(W, beta, kappa, n, lo, hi, reps, rng):
    cnt = 0
    for _ in range(reps):
        t1 = visit_times(W, beta, kappa, n, rng)
        t2 = visit_times(W, beta, kappa, n, rng)
        if _common_point_inside(t1, t2, lo, hi):
            cnt += 1
    return np.int64(cnt)


def quenched_estimates(W, beta, kappa, n, lo, hi, outer, inner, rng):
    out = np.empty(outer, np.float64)
    for o in range(outer):
        ref = visit_times(W, beta, kappa, n, rng)
        hits = 0
        for _ in range(inner):
            t2 = visit_times(W, beta, kappa, n, rng)
            if _common_point_inside(ref, t2, lo, hi):
                hits += 1
        out[o] = hits / inner
    return out


def measure_values(W, beta, N, qa, qb, jmax, reps, rng):
    m = qa.size
    vals = np.full((reps, m), -np.inf)
    trunc = 0
    for r in range(reps):
        g = 0.0
        pending = list(range(m))
        for _ in range(jmax):
            g += rng.standard_exponential()
            lvl = -np.log(g)
            ts = visit_times(W, beta, 0.0, N, rng)
            still = []
            for q in pending:
                k = int(np.searchsorted(ts, qa[q], side="right"))
                if k < ts.size and ts[k] < qb[q]:
                    vals[r, q] = lvl
                else:
                    still.append(q)
            pending = still
            if not pending:
                break
        if pending:
            trunc += 1
    return vals, np.int64(trunc)


def path_pairs(W, beta, kappa, n, v, rng):
    K = v.size
    if K == 0:
        return np.empty(0, np.int64), np.empty(0, np.float64)
    cur = _initial_points(W, n, K, rng)
    times_parts = [cur.copy()]
    idx_parts = [np.arange(K)]
    active = np.arange(K)
    while active.size:
        gaps = np.minimum(phi_batch(beta, kappa, active.size, rng), n + 1)
        nxt = cur[active] + gaps
        cur[active] = nxt
        alive = nxt <= n
        act = active[alive]
        times_parts.append(cur[act].copy())
        idx_parts.append(act)
        active = act
    ts = np.concatenate(times_parts)
    idx = np.concatenate(idx_parts)
    return ts, v[idx]
