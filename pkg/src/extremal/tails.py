"""Subexponential tail families in the Gumbel domain of attraction.

Two closed-form families are supported, parameterized on the log scale
(``s = log x`` throughout, so every evaluation is over/underflow-safe):

* lognormal-type:        nu_bar(x) = c x^beta_t (log x)^xi exp(-lam (log x)^gamma)
* super-lognormal-type:  nu_bar(x) = c x^beta_t (log x)^xi exp(lam (log x)^gamma)
                                       * exp(-rho exp(mu (log x)^alpha))

Each model carries a truncation point ``x0`` (the smallest grid point
``>= e`` where the tail is decreasing with value ``<= 1``); the normalized
tail ``nu_bar / nu_bar(x0)`` is then an exact survival function on
``[x0, inf)`` whose reciprocal hazard ``h`` is available in closed form.
On top of these the module provides the quantile transforms ``V`` and
``G`` (log-domain bisection), the slowly-growing index function of the
quantile representation, and the centering/scaling sequences used by the
extremal limit experiments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError
from .renewal import ReturnLaw, WanderingTable

_GRID_STEP = 1.0 / 256.0
_SCAN_MAX = 700.0
_EXP_CLIP = 700.0  # keep exp() finite inside log-tail evaluations


@dataclass(frozen=True)
class LognormalTail:
    """Lognormal-type tail; requires c > 0, lam > 0, gamma > 1."""

    c: float
    beta_t: float = 0.0
    xi: float = 0.0
    lam: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        if not self.c > 0.0:
            raise ValueError("c must be > 0")
        if not self.lam > 0.0:
            raise ValueError("lambda must be > 0")
        if not self.gamma > 1.0:
            raise ValueError("gamma must be > 1")

    def log_tail(self, s):
        s = np.asarray(s, dtype=np.float64)
        out = math.log(self.c) + self.beta_t * s - self.lam * s**self.gamma
        if self.xi != 0.0:
            out = out + self.xi * np.log(s)
        return out

    def dlog_tail(self, s):
        """d/ds of log_tail; the reciprocal hazard is -x / dlog_tail(log x)."""
        s = np.asarray(s, dtype=np.float64)
        out = self.beta_t - self.lam * self.gamma * s ** (self.gamma - 1.0)
        if self.xi != 0.0:
            out = out + self.xi / s
        return out


@dataclass(frozen=True)
class SuperLognormalTail:
    """Super-lognormal-type tail; requires c, rho, mu > 0 and 0 < alpha < 1."""

    c: float
    beta_t: float = 0.0
    xi: float = 0.0
    lam: float = 0.0
    gamma: float = 0.0
    rho: float = 0.0
    mu: float = 0.0
    alpha: float = 0.0

    def __post_init__(self):
        if not self.c > 0.0:
            raise ValueError("c must be > 0")
        if not self.rho > 0.0:
            raise ValueError("rho must be > 0")
        if not self.mu > 0.0:
            raise ValueError("mu must be > 0")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must be in (0,1)")

    def _inner_exp(self, s):
        return np.exp(np.minimum(self.mu * s**self.alpha, _EXP_CLIP))

    def log_tail(self, s):
        s = np.asarray(s, dtype=np.float64)
        out = math.log(self.c) + self.beta_t * s - self.rho * self._inner_exp(s)
        if self.lam != 0.0:
            out = out + self.lam * s**self.gamma
        if self.xi != 0.0:
            out = out + self.xi * np.log(s)
        return out

    def dlog_tail(self, s):
        s = np.asarray(s, dtype=np.float64)
        out = (
            self.beta_t
            - self.rho * self.mu * self.alpha * s ** (self.alpha - 1.0) * self._inner_exp(s)
        )
        if self.lam != 0.0:
            out = out + self.lam * self.gamma * s ** (self.gamma - 1.0)
        if self.xi != 0.0:
            out = out + self.xi / s
        return out


TailFamily = LognormalTail | SuperLognormalTail


def family_from_dict(d: dict) -> TailFamily:
    """Build a family from its JSON form; missing numeric fields become 0."""

    def g(key):
        return float(d.get(key, 0.0))

    kind = d.get("family")
    if kind == "lognormal":
        return LognormalTail(
            c=g("c"), beta_t=g("beta_t"), xi=g("xi"), lam=g("lambda"), gamma=g("gamma")
        )
    if kind == "superlognormal":
        return SuperLognormalTail(
            c=g("c"),
            beta_t=g("beta_t"),
            xi=g("xi"),
            lam=g("lambda"),
            gamma=g("gamma"),
            rho=g("rho"),
            mu=g("mu"),
            alpha=g("alpha"),
        )
    raise ValueError(f'family must be "lognormal" or "superlognormal", got {kind!r}')


def family_to_dict(family: TailFamily) -> dict:
    if isinstance(family, LognormalTail):
        return {
            "family": "lognormal",
            "c": family.c,
            "beta_t": family.beta_t,
            "xi": family.xi,
            "lambda": family.lam,
            "gamma": family.gamma,
        }
    return {
        "family": "superlognormal",
        "c": family.c,
        "beta_t": family.beta_t,
        "xi": family.xi,
        "lambda": family.lam,
        "gamma": family.gamma,
        "rho": family.rho,
        "mu": family.mu,
        "alpha": family.alpha,
    }


def _decreasing_from(family: TailFamily, cand: float) -> bool:
    probes = np.minimum(cand * np.array([2.0, 4.0, 8.0, 16.0, 32.0, 64.0]), _SCAN_MAX)
    return bool(np.all(family.dlog_tail(probes) < 0.0))


@dataclass(frozen=True)
class TailModel:
    """A tail family together with its computed truncation point."""

    family: TailFamily
    x0: float
    log_x0: float
    log_nu_x0: float

    @property
    def nu_bar_x0(self) -> float:
        return math.exp(self.log_nu_x0)

    @classmethod
    def build(cls, family: TailFamily) -> "TailModel":
        """Locate x0: smallest grid point >= e with a decreasing tail <= 1."""
        s = 1.0
        while s <= _SCAN_MAX:
            block = s + _GRID_STEP * np.arange(4096)
            ok = (family.dlog_tail(block) < 0.0) & (family.log_tail(block) <= 0.0)
            for i in np.flatnonzero(ok):
                cand = float(block[i])
                if _decreasing_from(family, cand):
                    return cls(
                        family=family,
                        x0=math.exp(cand),
                        log_x0=cand,
                        log_nu_x0=float(family.log_tail(cand)),
                    )
            s = float(block[-1]) + _GRID_STEP
        raise ValueError(
            "no usable truncation point: tail is not decreasing with value <= 1 "
            "anywhere below exp(700)"
        )


def unit_scaled(family: TailFamily) -> TailFamily:
    """Rescale c so the computed truncation point carries tail value 1.

    Keeps series term counts and the quantile truncation in a sane numeric
    range: the rebuilt model has nu_bar(x0) = 1 up to a rounding grid step.
    """
    model = TailModel.build(family)
    c_new = math.exp(math.log(family.c) - model.log_nu_x0)
    return replace(family, c=c_new)


# ---------------------------------------------------------------------------
# pointwise evaluations
# ---------------------------------------------------------------------------


def _as_log_arg(model: TailModel, x, *, strict: bool) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)) or np.any(x <= 0.0):
        raise DomainError("x must be finite and positive")
    s = np.log(x)
    lim = model.log_x0 - 1e-12
    if strict:
        if np.any(s <= lim):
            raise DomainError(f"x must be > x0 = {model.x0}")
    elif np.any(s < lim):
        raise DomainError(f"x must be >= x0 = {model.x0}")
    return s


def log_nu_bar(model: TailModel, x):
    """log of the tail function; defined for x >= x0."""
    s = _as_log_arg(model, x, strict=False)
    out = model.family.log_tail(s)
    return float(out) if np.ndim(x) == 0 else out


def nu_bar(model: TailModel, x):
    """Tail function value; underflows to 0 for very deep arguments."""
    out = np.exp(log_nu_bar(model, x))
    return float(out) if np.ndim(x) == 0 else out


def aux_h(model: TailModel, x):
    """Reciprocal hazard of the normalized tail: h(x) = -x / (log nu_bar)'(x)."""
    s = _as_log_arg(model, x, strict=False)
    d = -model.family.dlog_tail(s)
    if np.any(d <= 0.0):
        raise DomainError("tail is not decreasing at x; h undefined")
    out = np.asarray(x, dtype=np.float64) / d
    return float(out) if np.ndim(x) == 0 else out


# ---------------------------------------------------------------------------
# quantile transforms
# ---------------------------------------------------------------------------


def _invert_log_tail(model: TailModel, target: np.ndarray, rtol: float) -> np.ndarray:
    """Solve log_tail(s) = target for each entry; target < log_tail(log x0)."""
    fam = model.family
    lo = np.full(target.shape, model.log_x0)
    hi = np.full(target.shape, model.log_x0)
    step = np.ones(target.shape)
    for _ in range(200):
        mask = fam.log_tail(hi) >= target
        if not mask.any():
            break
        hi = np.where(mask, hi + step, hi)
        step = np.where(mask, 2.0 * step, step)
    else:  # pragma: no cover - log_tail -> -inf for valid families
        raise RuntimeError("failed to bracket the quantile")
    for _ in range(200):
        live = (hi - lo) > rtol * np.maximum(hi, 1.0)
        if not live.any():
            break
        mid = 0.5 * (lo + hi)
        left = fam.log_tail(mid) >= target
        lo = np.where(live & left, mid, lo)
        hi = np.where(live & ~left, mid, hi)
    return 0.5 * (lo + hi)


def quantile_V_log(model: TailModel, log_y, rtol: float = 1e-12):
    """V at log-scale argument: the x with nu_bar(x) = exp(-log_y).

    Arguments at or below log(1/nu_bar(x0)) return x0 (quantile truncation).
    """
    ly = np.asarray(log_y, dtype=np.float64)
    if not np.all(np.isfinite(ly)):
        raise DomainError("log-argument must be finite")
    out = np.full(ly.shape, model.x0)
    solve = ly > -model.log_nu_x0
    if np.any(solve):
        s = _invert_log_tail(model, -ly[solve], rtol)
        out[solve] = np.exp(s)
    return float(out) if np.ndim(log_y) == 0 else out


def quantile_V(model: TailModel, y, rtol: float = 1e-12):
    """Generalized inverse of 1/nu_bar (nondecreasing, truncated at x0)."""
    y = np.asarray(y, dtype=np.float64)
    if not np.all(np.isfinite(y)) or np.any(y <= 0.0):
        raise DomainError("y must be finite and positive")
    out = quantile_V_log(model, np.log(y), rtol=rtol)
    return float(out) if np.ndim(y) == 0 else out


def quantile_G(model: TailModel, x, rtol: float = 1e-12):
    """Quantile transform of the normalized tail: solves nu_bar = nu_bar(x0)/x."""
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)) or np.any(x <= 1.0):
        raise DomainError("x must be finite and > 1")
    out = quantile_V_log(model, np.log(x) - model.log_nu_x0, rtol=rtol)
    return float(out) if np.ndim(x) == 0 else out


def zeta(model: TailModel, x, rtol: float = 1e-12):
    """Index function of the quantile growth: log(x) h(G(x)) / G(x).

    Grows to infinity slower than log; requires x > e and G(x) > x0.
    """
    xv = np.asarray(x, dtype=np.float64)
    if np.any(xv <= math.e):
        raise DomainError("zeta needs x > e")
    G = np.asarray(quantile_G(model, xv, rtol=rtol))
    if np.any(G <= model.x0):
        raise DomainError("x too small: quantile collapses to the truncation point")
    out = np.log(xv) * np.asarray(aux_h(model, G)) / G
    return float(out) if np.ndim(x) == 0 else out


# ---------------------------------------------------------------------------
# normalizing sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalizingSequences:
    """Centering b_n and scale a_n for running maxima on horizon n."""

    n: int
    w_n: float
    b_n: float
    a_n: float
    centering_extra: float  # the second centering term V(1/sf(n))

    def __post_init__(self):
        vals = (self.w_n, self.b_n, self.a_n, self.centering_extra)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("normalizing sequences must be finite")
        if self.a_n <= 0.0:
            raise ValueError("a_n must be positive")
        if self.b_n < self.centering_extra:
            raise ValueError("b_n must dominate its secondary term")


def _log_inv_sf(law: ReturnLaw, n: int) -> float:
    # log(1 / P(gap > n)), evaluated in log space
    ln1 = math.log1p(n)
    return law.beta * ln1 + law.kappa * math.log(1.0 + ln1)


def normalizers(
    model: TailModel,
    law: ReturnLaw,
    n: int,
    table: WanderingTable | None = None,
    rtol: float = 1e-12,
) -> NormalizingSequences:
    """Centering and scale: b_n = V(w_n) + V(1/sf(n)), a_n = h(V(w_n))."""
    if n < 2:
        raise DomainError("normalizers need n >= 2")
    table = table if table is not None else WanderingTable(law)
    w_n = table.value(n)
    v_w = quantile_V_log(model, math.log(w_n), rtol=rtol)
    a_n = aux_h(model, v_w)
    extra = quantile_V_log(model, _log_inv_sf(law, n), rtol=rtol)
    return NormalizingSequences(
        n=n, w_n=w_n, b_n=v_w + extra, a_n=a_n, centering_extra=extra
    )


def centering_ratio(
    model: TailModel,
    law: ReturnLaw,
    n: int,
    table: WanderingTable | None = None,
    rtol: float = 1e-12,
) -> float:
    """Secondary-to-scale ratio V(1/sf(n)) / a_n.

    Tends to 0 when a single extreme noise value dominates the running
    maximum, and diverges when it does not; the direction is a property of
    the tail family.
    """
    ns = normalizers(model, law, n, table=table, rtol=rtol)
    return ns.centering_extra / ns.a_n


# ---------------------------------------------------------------------------
# quantile-increment diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuantileIncrementDiagnostics:
    """Finite-x ratios probing the regularity of the quantile transform."""

    x: np.ndarray
    shift_ratio: np.ndarray  # |G(x (log x)^alpha) - G(x)| / ((log log x) h(G(x)))
    dyadic_ratios: list[np.ndarray]  # per x: (G(x) - G(x 2^-j)) / (j^2 h(G(x)))
    growth_ratio: np.ndarray  # G(x) / exp((log log x)^(1+delta) / (1+delta))


def mtg4_diagnostics(
    model: TailModel,
    x_grid,
    alpha: float = 1.0,
    rho: float = 0.4,
    delta: float = 0.5,
) -> QuantileIncrementDiagnostics:
    """Evaluate quantile-increment ratios on an increasing grid of large x.

    ``dyadic_ratios[i]`` covers j = 1..floor(rho log x / zeta(x)) and may be
    empty when that range is empty at desk scale; callers assert boundedness
    or positivity on whatever the range contains.
    """
    x = np.asarray(x_grid, dtype=np.float64)
    if x.ndim != 1 or x.size == 0 or np.any(np.diff(x) <= 0.0):
        raise DomainError("x_grid must be a nonempty increasing 1-d grid")
    if x[0] <= math.e:
        raise DomainError("x_grid entries must exceed e")
    logx = np.log(x)
    loglogx = np.log(logx)
    G = np.asarray(quantile_G(model, x))
    hG = np.asarray(aux_h(model, G))
    G_shift = np.asarray(quantile_G(model, x * logx**alpha))
    shift_ratio = np.abs(G_shift - G) / (loglogx * hG)

    zeta_x = np.asarray(zeta(model, x))
    dyadic = []
    for i in range(x.size):
        jmax = int(math.floor(rho * logx[i] / zeta_x[i]))
        if jmax < 1:
            dyadic.append(np.empty(0))
            continue
        j = np.arange(1, jmax + 1, dtype=np.float64)
        Gj = np.asarray(quantile_G(model, x[i] * 2.0 ** (-j)))
        dyadic.append((G[i] - Gj) / (j**2 * hG[i]))

    growth = G / np.exp(loglogx ** (1.0 + delta) / (1.0 + delta))
    return QuantileIncrementDiagnostics(
        x=x, shift_ratio=shift_ratio, dyadic_ratios=dyadic, growth_ratio=growth
    )
