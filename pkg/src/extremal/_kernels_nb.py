"""Numba-compiled inner loops.

Mirror of :mod:`extremal._kernels_np`; keep signatures in sync. All kernels
take a ``numpy.random.Generator`` and draw scalar uniforms in a fixed order,
so results are reproducible for a fixed seed. ``nogil`` lets replicate blocks
run on real threads.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

# Gaps beyond any usable horizon are clamped here; int64-safe.
GAP_CAP = np.int64(2) ** 62
_LOG_CAP = 42.5  # exp(42.5) < 2**62

_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def _sf(m, beta, kappa):
    # survival P(gap > m) = (m+1)^-beta * (1+log(m+1))^-kappa
    s = (m + 1.0) ** (-beta)
    if kappa != 0.0:
        s *= (1.0 + math.log(m + 1.0)) ** (-kappa)
    return s


@njit(**_JIT)
def _one_gap(beta, kappa, rng):
    u = rng.random()
    if u < 1e-300:
        u = 1e-300
    if kappa == 0.0:
        lt = -math.log(u) / beta
        if lt > _LOG_CAP:
            return GAP_CAP
        p = np.int64(math.floor(math.exp(lt)))
        return p if p >= 1 else np.int64(1)
    # kappa > 0: survival has no closed inverse; bracket then bisect for the
    # smallest m >= 1 with sf(m) < u.
    lo = np.int64(1)
    if _sf(lo, beta, kappa) < u:
        return lo
    hi = np.int64(2)
    while _sf(hi, beta, kappa) >= u:
        lo = hi
        hi *= 2
        if hi >= GAP_CAP:
            return GAP_CAP
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _sf(mid, beta, kappa) < u:
            hi = mid
        else:
            lo = mid
    return hi


@njit(**_JIT)
def phi_batch(beta, kappa, size, rng):
    out = np.empty(size, np.int64)
    for i in range(size):
        out[i] = _one_gap(beta, kappa, rng)
    return out


@njit(**_JIT)
def _visit_times(W, beta, kappa, n, rng):
    wn = W[n]
    u = rng.random()
    m0 = np.searchsorted(W, u * wn)
    cap = 16
    buf = np.empty(cap, np.int64)
    buf[0] = m0
    cnt = 1
    cur = np.int64(m0)
    while True:
        step = _one_gap(beta, kappa, rng)
        if step > n - cur:
            break
        cur = cur + step
        if cnt == cap:
            cap *= 2
            nbuf = np.empty(cap, np.int64)
            nbuf[:cnt] = buf[:cnt]
            buf = nbuf
        buf[cnt] = cur
        cnt += 1
    return buf[:cnt].copy()


@njit(**_JIT)
def visit_times(W, beta, kappa, n, rng):
    return _visit_times(W, beta, kappa, n, rng)


@njit(**_JIT)
def visit_min_batch(W, n, reps, rng):
    wn = W[n]
    out = np.empty(reps, np.int64)
    for r in range(reps):
        out[r] = np.searchsorted(W, rng.random() * wn)
    return out


@njit(**_JIT)
def sojourn_counts(beta, kappa, n, reps, rng):
    out = np.empty(reps, np.int64)
    for r in range(reps):
        cnt = np.int64(1)  # the walk starts on 0, inside [0, n]
        s = np.int64(0)
        while True:
            step = _one_gap(beta, kappa, rng)
            if step > n - s:
                break
            s += step
            cnt += 1
        out[r] = cnt
    return out


@njit(**_JIT)
def hit_count(beta, kappa, n, reps, rng):
    # s <= n-1 + GAP_CAP stays inside int64, so no overflow guard needed
    if n == 0:
        return np.int64(reps)
    hits = np.int64(0)
    for r in range(reps):
        s = np.int64(0)
        while s < n:
            s += _one_gap(beta, kappa, rng)
        if s == n:
            hits += 1
    return hits


@njit(**_JIT)
def _common_point_inside(t1, t2, lo, hi):
    i = 0
    j = 0
    while i < t1.size and j < t2.size:
        a = t1[i]
        b = t2[j]
        if a == b:
            if lo < a < hi:
                return True
            i += 1
            j += 1
        elif a < b:
            i += 1
        else:
            j += 1
    return False


@njit(**_JIT)
def intersect_count(W, beta, kappa, n, lo, hi, reps, rng):
    cnt = np.int64(0)
    for r in range(reps):
        t1 = _visit_times(W, beta, kappa, n, rng)
        t2 = _visit_times(W, beta, kappa, n, rng)
        if _common_point_inside(t1, t2, lo, hi):
            cnt += 1
    return cnt


@njit(**_JIT)
def quenched_estimates(W, beta, kappa, n, lo, hi, outer, inner, rng):
    out = np.empty(outer, np.float64)
    for o in range(outer):
        ref = _visit_times(W, beta, kappa, n, rng)
        hits = 0
        for i in range(inner):
            t2 = _visit_times(W, beta, kappa, n, rng)
            if _common_point_inside(ref, t2, lo, hi):
                hits += 1
        out[o] = hits / inner
    return out


@njit(**_JIT)
def measure_values(W, beta, N, qa, qb, jmax, reps, rng):
    m = qa.size
    vals = np.full((reps, m), -np.inf)
    trunc = np.int64(0)
    for r in range(reps):
        g = 0.0
        assigned = 0
        done = np.zeros(m, np.bool_)
        for j in range(jmax):
            g += -math.log1p(-rng.random())
            lvl = -math.log(g)
            ts = _visit_times(W, beta, 0.0, N, rng)
            for q in range(m):
                if not done[q]:
                    for k in range(ts.size):
                        t = ts[k]
                        if t >= qb[q]:
                            break
                        if t > qa[q]:
                            vals[r, q] = lvl
                            done[q] = True
                            assigned += 1
                            break
            if assigned == m:
                break
        if assigned < m:
            trunc += 1
    return vals, trunc


@njit(**_JIT)
def path_pairs(W, beta, kappa, n, v, rng):
    cap = 4 * (v.size + 16)
    ts = np.empty(cap, np.int64)
    vs = np.empty(cap, np.float64)
    cnt = 0
    for j in range(v.size):
        t = _visit_times(W, beta, kappa, n, rng)
        need = cnt + t.size
        while need > cap:
            cap *= 2
            nts = np.empty(cap, np.int64)
            nts[:cnt] = ts[:cnt]
            ts = nts
            nvs = np.empty(cap, np.float64)
            nvs[:cnt] = vs[:cnt]
            vs = nvs
        vj = v[j]
        for k in range(t.size):
            ts[cnt] = t[k]
            vs[cnt] = vj
            cnt += 1
    return ts[:cnt].copy(), vs[:cnt].copy()
