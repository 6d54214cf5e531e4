"""Named experiments mapping the limit-theorem claims to pass/fail records.

Each experiment reads an effective parameter dict (defaults overlaid with
user config), runs its Monte Carlo or deterministic evaluation, and returns
a self-contained record: config echo, estimates, targets with provenance,
and check verdicts. Every pass/fail threshold in a record comes from the
config echo, never from a hidden constant.

Replicated work is split into fixed-size blocks, each driven by its own
seed substream, so results are bitwise independent of the worker count and
of block execution order.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._backend import get_backend
from .errors import DomainError
from .regen import hits_closed, sample_regen_set
from .renewal import (
    ReturnLaw,
    WanderingTable,
    hit_prob_mc,
    intersection_prob_mc,
    mean_sojourn_mc,
)
from .seeding import seed_substream
from .stats import binomial_ci, ks_one_sample, ks_two_sample, loglog_slope
from .supmeasure import (
    IntervalFamily,
    gumbel_marginal_cdf,
    sample_measure_values,
    self_affinity_check,
    stationarity_check,
)
from .process import path_max, running_max_path, simulate_path
from .tails import (
    TailModel,
    centering_ratio,
    family_from_dict,
    mtg4_diagnostics,
    zeta,
)

DEFAULT_SEED = 20260810
SCHEMA_VERSION = 1
_BLOCK = 1024
_PATH_BLOCK = 16


@dataclass
class ExperimentConfig:
    """Invocation settings: experiment name, parameter overrides, seeding."""

    experiment: str
    params: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    workers: int = 1
    check: bool = False


@dataclass
class ResultRecord:
    """Self-contained run record; every threshold also appears in config."""

    experiment: str
    config: dict
    results: dict
    checks: list
    passed: bool
    wall_clock_s: float
    seed: int
    schema: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "experiment": self.experiment,
            "config": _jsonable(self.config),
            "results": _jsonable(self.results),
            "checks": _jsonable(self.checks),
            "passed": self.passed,
            "wall_clock_s": self.wall_clock_s,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    return obj


def _check(name, observed, passed, *, target=None, tol=None, provenance=""):
    return {
        "name": name,
        "observed": _jsonable(observed),
        "target": _jsonable(target),
        "tol": _jsonable(tol),
        "passed": bool(passed),
        "provenance": provenance,
    }


def _blocks(total: int, size: int):
    out, start, idx = [], 0, 0
    while start < total:
        out.append((idx, min(size, total - start)))
        start += size
        idx += 1
    return out

def _run_blocks(fn, blocks, workers: int):
    if workers <= 1:
        return [fn(i, sz) for i, sz in blocks]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        futures = [ex.submit(fn, i, sz) for i, sz in blocks]
        return [f.result() for f in futures]


# ---------------------------------------------------------------------------
# shared default families (scales chosen so desk-scale trends are visible)
# ---------------------------------------------------------------------------

LOGNORMAL_DEFAULT = {"family": "lognormal", "c": 1.0, "lambda": 0.25, "gamma": 2.0}
LOGNORMAL_UNIT = {"family": "lognormal", "c": 1.0, "lambda": 1.0, "gamma": 2.0}
SUPER_04 = {"family": "superlognormal", "c": 1.0, "rho": 0.5, "mu": 1.0, "alpha": 0.4}
SUPER_07 = {"family": "superlognormal", "c": 1.0, "rho": 0.5, "mu": 1.0, "alpha": 0.7}
SUPER_TREND = {"family": "superlognormal", "c": 1.0, "rho": 1.0, "mu": 1.0, "alpha": 0.5}


# ---------------------------------------------------------------------------
# experiment implementations
# ---------------------------------------------------------------------------


def _exp_marginal_gumbel(params, seed, workers):
    beta = params["beta"]
    N = params["resolution"]
    jmax = params["j_max"]
    results, checks, samples = {}, [], {}
    for case in params["cases"]:
        tag = case["name"]
        n_samp = case["samples"]

        if case["kind"] == "closed":
            t = case["t"]
            fam = IntervalFamily.of([[0.0, t]])
            closed = True
            cdf = lambda x, _t=t: gumbel_marginal_cdf(_t, x, beta)
            target_note = f"exp(-t^(1-beta) e^-x), t={t}, beta={beta}"
        else:
            a, b = case["a"], case["b"]
            if (a, b) != (0.0, 1.0):
                raise DomainError("open-interval case supports only (0,1)")
            fam = IntervalFamily.of([[a, b]])
            closed = False
            cdf = lambda x: np.exp(-np.exp(-x))
            target_note = "standard Gumbel exp(-e^-x) (first arrival level)"

        def block(i, sz, _fam=fam, _closed=closed, _tag=tag):
            rng = seed_substream(seed, i, f"marginal:{_tag}")
            return sample_measure_values(
                beta, _fam, N, sz, rng, J_max=jmax, closed=_closed
            )

        parts = _run_blocks(block, _blocks(n_samp, _BLOCK), workers)
        vals = np.concatenate([p[0][:, 0] for p in parts])
        trunc = sum(p[1] for p in parts)
        finite = vals[np.isfinite(vals)]
        ks = ks_one_sample(finite, cdf) if trunc == 0 else float("inf")
        results[tag] = {
            "samples": n_samp,
            "ks": ks,
            "truncated_reps": int(trunc),
            "mean": float(finite.mean()) if finite.size else float("nan"),
        }
        samples[tag] = vals
        checks.append(
            _check(
                f"{tag}-ks",
                ks,
                ks < case["ks_tol"],
                target=0.0,
                tol=case["ks_tol"],
                provenance=target_note,
            )
        )
    return results, checks, samples


def _exp_hitting_law(params, seed, workers):
    beta = params["beta"]
    N = params["resolution"]
    draws = params["draws"]
    law = ReturnLaw(beta=beta)
    table = WanderingTable(law)
    table.prefix(N)

    rng = seed_substream(seed, 0, "hitting:sets")
    sets = [sample_regen_set(beta, N, rng, table=table) for _ in range(draws)]
    results, checks, samples = {}, [], {}
    for t in params["t_list"]:
        hits = sum(1 for s in sets if hits_closed(s, 0.0, t))
        est = hits / draws
        target = t ** (1.0 - beta)
        se = math.sqrt(max(est * (1.0 - est), 1.0 / draws) / draws)
        tol = params["z"] * se + params["resolution_allowance"]
        lo, hi = binomial_ci(hits, draws, params["z"])
        results[f"hit[0,{t}]"] = {"estimate": est, "target": target, "ci": [lo, hi]}
        checks.append(
            _check(
                f"hit[0,{t}]",
                est,
                abs(est - target) <= tol,
                target=target,
                tol=tol,
                provenance=f"shift law: P(min <= t) = t^(1-beta), beta={beta}",
            )
        )

    # rescaled-minimum law over the whole unit interval (KS form)
    n = params["min_law_n"]
    reps = params["min_law_reps"]
    mins = np.concatenate(
        _run_blocks(
            lambda i, sz: np.asarray(
                _min_batch(table, n, sz, seed_substream(seed, i, "hitting:min"))
            ),
            _blocks(reps, _BLOCK),
            workers,
        )
    )
    ks = ks_one_sample(mins / n, lambda x: np.clip(x, 0.0, 1.0) ** (1.0 - beta))
    results["min_law"] = {"n": n, "reps": reps, "ks": ks}
    samples["min_over_n"] = mins / n
    checks.append(
        _check(
            "min-law-ks",
            ks,
            ks < params["min_law_ks_tol"],
            target=0.0,
            tol=params["min_law_ks_tol"],
            provenance="rescaled initial point CDF x^(1-beta)",
        )
    )
    return results, checks, samples


def _min_batch(table, n, size, rng):
    from . import kernels

    return kernels.visit_min_batch(table.prefix(n), n, size, rng)


def _exp_self_affinity(params, seed, workers):
    beta = params["beta"]
    ks = self_affinity_check(
        beta,
        params["a"],
        params["t0"],
        params["samples"],
        params["resolution"],
        seed_substream(seed, 0, "self-affinity"),
    )
    results = {"ks": ks, "samples": params["samples"]}
    checks = [
        _check(
            "self-affinity-ks",
            ks,
            ks < params["ks_tol"],
            target=0.0,
            tol=params["ks_tol"],
            provenance=f"scaling law: M(a.) = M(.) + (1-beta) log a, a={params['a']}",
        )
    ]
    return results, checks, None


def _exp_stationarity(params, seed, workers):
    beta = params["beta"]
    ks = stationarity_check(
        beta,
        params["r"],
        params["t"],
        params["samples"],
        params["resolution"],
        seed_substream(seed, 0, "stationarity"),
    )
    results = {"ks": ks, "samples": params["samples"]}
    checks = [
        _check(
            "stationarity-ks",
            ks,
            ks < params["ks_tol"],
            target=0.0,
            tol=params["ks_tol"],
            provenance=f"translation invariance, r={params['r']}, t={params['t']}",
        )
    ]
    return results, checks, None


def _law_from(params) -> ReturnLaw:
    if "law" in params:
        return ReturnLaw.from_dict(params["law"])
    return ReturnLaw(beta=params["beta"])


def _exp_intersection_scaling(params, seed, workers):
    law = _law_from(params)
    beta = law.beta
    interval = tuple(params["interval"])
    estimates = []
    results = {"per_n": []}
    for n in params["n_grid"]:
        reps = params["reps"]
        table = WanderingTable(law)
        counts = _run_blocks(
            lambda i, sz, _n=n, _tab=table: _intersect_block(
                law, _n, interval, sz, seed_substream(seed, i, f"intersect:{_n}"), _tab
            ),
            _blocks(reps, _BLOCK),
            workers,
        )
        hits = int(sum(counts))
        est = hits / reps
        se = math.sqrt(max(est * (1.0 - est), 1.0 / reps) / reps)
        estimates.append(est)
        results["per_n"].append({"n": n, "estimate": est, "stderr": se, "reps": reps})
    slope, stderr = loglog_slope(params["n_grid"], estimates)
    target = 2.0 * beta - 1.0
    results["slope"] = slope
    results["slope_stderr"] = stderr
    checks = [
        _check(
            "intersection-slope",
            slope,
            abs(slope - target) <= params["slope_tol"],
            target=target,
            tol=params["slope_tol"],
            provenance="two-set collision probability scales like n^(2 beta - 1)",
        )
    ]
    return results, checks, None


def _intersect_block(law, n, interval, reps, rng, table):
    from . import kernels

    lo, hi = n * interval[0], n * interval[1]
    W = table.prefix(n)
    return int(kernels.intersect_count(W, law.beta, law.kappa, n, lo, hi, reps, rng))


def _exp_range_stats(params, seed, workers):
    results, checks = {}, []

    so = params["sojourn"]
    law1 = ReturnLaw(beta=so["beta"])
    est, se = mean_sojourn_mc(
        law1, so["n"], so["reps"], seed_substream(seed, 0, "range:sojourn")
    )
    target = so["n"] ** so["beta"] / (
        math.gamma(1.0 + so["beta"]) * math.gamma(1.0 - so["beta"])
    )
    results["sojourn"] = {"estimate": est, "stderr": se, "target": target}
    checks.append(
        _check(
            "sojourn-mean",
            est,
            abs(est - target) <= so["rel_tol"] * target,
            target=target,
            tol=so["rel_tol"] * target,
            provenance="mean visits in [0,n] ~ n^b/(Gamma(1+b)Gamma(1-b))",
        )
    )

    ht = params["hit"]
    law2 = ReturnLaw(beta=ht["beta"])
    blocks = _blocks(ht["reps"], max(_BLOCK * 32, 1))
    hits = _run_blocks(
        lambda i, sz: _hit_block(law2, ht["n"], sz, seed_substream(seed, i, "range:hit")),
        blocks,
        workers,
    )
    est2 = float(sum(hits)) / ht["reps"]
    target2 = ht["n"] ** (ht["beta"] - 1.0) / (
        math.gamma(ht["beta"]) * math.gamma(1.0 - ht["beta"])
    )
    results["hit"] = {"estimate": est2, "target": target2, "reps": ht["reps"]}
    checks.append(
        _check(
            "point-hit-prob",
            est2,
            abs(est2 - target2) <= ht["rel_tol"] * target2,
            target=target2,
            tol=ht["rel_tol"] * target2,
            provenance="P(n in range) ~ n^(b-1)/(Gamma(b)Gamma(1-b))",
        )
    )
    return results, checks, None


def _hit_block(law, n, reps, rng):
    from . import kernels

    return int(kernels.hit_count(law.beta, law.kappa, n, reps, rng))


def _exp_centering(params, seed, workers):
    law = ReturnLaw(beta=params["beta"])
    table = WanderingTable(law)
    results, checks = {"cases": []}, []
    for case in params["cases"]:
        model = TailModel.build(family_from_dict(case["tail"]))
        ratios = [
            centering_ratio(model, law, int(n), table=table) for n in params["n_grid"]
        ]
        diffs = np.diff(ratios)
        if case["direction"] == "decreasing":
            mono = bool(np.all(diffs < 0.0))
            bound_ok = ratios[-1] / ratios[0] < case["last_over_first"]
        else:
            mono = bool(np.all(diffs > 0.0))
            bound_ok = ratios[-1] / ratios[0] > case["last_over_first"]
        results["cases"].append(
            {"tail": case["tail"], "ratios": ratios, "direction": case["direction"]}
        )
        checks.append(
            _check(
                f"centering-{case['name']}-monotone",
                ratios,
                mono,
                provenance=f"secondary centering term over scale, {case['direction']}",
            )
        )
        checks.append(
            _check(
                f"centering-{case['name']}-ratio",
                ratios[-1] / ratios[0],
                bound_ok,
                target=case["last_over_first"],
                tol=None,
                provenance="last/first ratio bound",
            )
        )
    return results, checks, None


def _exp_process_convergence(params, seed, workers):
    law = _law_from(params)
    model = TailModel.build(family_from_dict(params["tail"]))
    n = params["n"]
    reps = params["reps"]
    table = WanderingTable(law)
    table.prefix(n)

    from .tails import normalizers

    norm = normalizers(model, law, n, table=table)

    def block(i, sz):
        rng = seed_substream(seed, i, "process:paths")
        out = np.empty(sz)
        for k in range(sz):
            path = simulate_path(model, law, n, rng, table=table)
            out[k] = (path_max(path, 1.0) - norm.b_n) / norm.a_n
        return out

    vals = np.concatenate(_run_blocks(block, _blocks(reps, _PATH_BLOCK), workers))
    ks = ks_one_sample(vals, lambda x: np.exp(-np.exp(-x)))

    # structural sanity on one fresh path: running maxima are nondecreasing
    probe = simulate_path(model, law, n, seed_substream(seed, 10**6, "process:probe"), table=table)
    grid = np.linspace(0.1, 1.0, 10)
    rm = running_max_path(probe, grid)
    monotone = bool(np.all(np.diff(rm) >= 0.0))

    results = {
        "n": n,
        "reps": reps,
        "ks": ks,
        "normalized_mean": float(vals.mean()),
        "normalized_std": float(vals.std()),
        "a_n": norm.a_n,
        "b_n": norm.b_n,
        "w_n": norm.w_n,
        "expected_terms": norm.w_n * model.nu_bar_x0,
    }
    checks = [
        _check(
            "gumbel-ks",
            ks,
            ks < params["ks_tol"],
            target=0.0,
            tol=params["ks_tol"],
            provenance="normalized running maximum vs standard Gumbel "
            "(diagnostic: convergence is logarithmically slow)",
        ),
        _check("running-max-monotone", rm, monotone, provenance="pathwise exact"),
    ]
    return results, checks, {"normalized_max": vals}


def _exp_mtg4(params, seed, workers):
    results, checks = {"cases": []}, []
    x_grid = np.asarray(params["x_grid"], dtype=np.float64)
    c_bound = params["bound"]
    for case in params["cases"]:
        fam = family_from_dict(case["tail"])
        model = TailModel.build(fam)
        diag = mtg4_diagnostics(
            model, x_grid, alpha=params["alpha"], rho=params["rho"], delta=params["delta"]
        )
        r4 = diag.shift_ratio
        r5_all = np.concatenate([r for r in diag.dyadic_ratios if r.size])
        growth_up = bool(np.all(np.diff(diag.growth_ratio) > 0.0))
        results["cases"].append(
            {
                "tail": case["tail"],
                "shift_ratio": r4,
                "dyadic_min": float(r5_all.min()) if r5_all.size else None,
                "growth_ratio": diag.growth_ratio,
            }
        )
        checks.append(
            _check(
                f"{case['name']}-shift-ratio-bounded",
                r4,
                bool(np.all((r4 > 1.0 / c_bound) & (r4 < c_bound))),
                target=None,
                tol=c_bound,
                provenance="|G(x log^a x) - G(x)| comparable to (log log x) h(G(x))",
            )
        )
        checks.append(
            _check(
                f"{case['name']}-dyadic-positive",
                float(r5_all.min()) if r5_all.size else float("nan"),
                bool(r5_all.size > 0 and np.all(r5_all > 0.0)),
                provenance="dyadic quantile increments stay positive",
            )
        )
        checks.append(
            _check(
                f"{case['name']}-growth-diverges",
                diag.growth_ratio,
                growth_up,
                provenance="G(x) outgrows exp((log log x)^(1+delta)/(1+delta))",
            )
        )

        if "zeta_ref" in case:
            ref = case["zeta_ref"]
            zx = np.asarray(zeta(model, x_grid))
            if ref == "lognormal":
                lam, gam = fam.lam, fam.gamma
                target = (1.0 / gam) * lam ** (-1.0 / gam) * np.log(x_grid) ** (1.0 / gam)
            else:
                mu, al = fam.mu, fam.alpha
                target = (
                    (1.0 / al)
                    * mu ** (-1.0 / al)
                    * np.log(np.log(x_grid)) ** ((1.0 - al) / al)
                )
            ratio = zx / target
            err = np.abs(ratio - 1.0)
            results["cases"][-1]["zeta_ratio"] = ratio
            checks.append(
                _check(
                    f"{case['name']}-zeta-ratio",
                    ratio,
                    bool(err[-1] < params["zeta_rel_tol"] and np.all(np.diff(err) < 0.0)),
                    target=1.0,
                    tol=params["zeta_rel_tol"],
                    provenance="index function tracks its closed-form growth rate",
                )
            )
            checks.append(
                _check(
                    f"{case['name']}-zeta-diverges",
                    zx,
                    bool(np.all(np.diff(zx) > 0.0)),
                    provenance="index function increases along a geometric grid",
                )
            )
    return results, checks, None


# ---------------------------------------------------------------------------
# registry and dispatch
# ---------------------------------------------------------------------------

_DEFAULTS: dict[str, dict] = {
    "marginal-gumbel": {
        "beta": 0.3,
        "resolution": 10_000,
        "j_max": 10_000,
        "cases": [
            {
                "name": "closed-half",
                "kind": "closed",
                "t": 0.5,
                "samples": 5_000,
                "ks_tol": 0.03,
            },
            {
                "name": "open-unit",
                "kind": "open",
                "a": 0.0,
                "b": 1.0,
                "samples": 10_000,
                "ks_tol": 0.015,
            },
        ],
    },
    "hitting-law": {
        "beta": 0.3,
        "resolution": 10_000,
        "draws": 10_000,
        "t_list": [0.25, 0.5],
        "z": 3.0,
        "resolution_allowance": 0.01,
        "min_law_n": 10_000,
        "min_law_reps": 10_000,
        "min_law_ks_tol": 0.02,
    },
    "self-affinity": {
        "beta": 0.3,
        "a": 0.5,
        "t0": 1.0,
        "samples": 5_000,
        "resolution": 10_000,
        "ks_tol": 0.04,
    },
    "stationarity": {
        "beta": 0.3,
        "r": 0.3,
        "t": 0.4,
        "samples": 5_000,
        "resolution": 10_000,
        "ks_tol": 0.04,
    },
    "intersection-scaling": {
        "beta": 0.3,
        "n_grid": [1_000, 10_000, 100_000],
        "reps": 200_000,
        "interval": [0.0, 1.0],
        "slope_tol": 0.1,
    },
    "range-stats": {
        "sojourn": {"beta": 0.3, "n": 100_000, "reps": 10_000, "rel_tol": 0.10},
        "hit": {"beta": 0.5, "n": 10_000, "reps": 1_000_000, "rel_tol": 0.15},
    },
    "centering-phenomenon": {
        "beta": 0.3,
        "n_grid": [10**4, 10**6, 10**8, 10**10, 10**12, 10**14, 10**16],
        "cases": [
            {
                "name": "lognormal",
                "tail": LOGNORMAL_DEFAULT,
                "direction": "decreasing",
                "last_over_first": 0.5,
            },
            {
                "name": "super-a04",
                "tail": SUPER_04,
                "direction": "decreasing",
                "last_over_first": 0.5,
            },
            {
                "name": "super-a07",
                "tail": SUPER_07,
                "direction": "increasing",
                "last_over_first": 2.0,
            },
        ],
    },
    "process-convergence": {
        "beta": 0.3,
        "tail": LOGNORMAL_DEFAULT,
        "n": 100_000,
        "reps": 2_000,
        "ks_tol": 0.15,
    },
    "mtg4-diagnostics": {
        "x_grid": [1e6, 1e9, 1e12, 1e15],
        "alpha": 1.0,
        "rho": 0.4,
        "delta": 0.5,
        "bound": 10.0,
        "zeta_rel_tol": 0.10,
        "cases": [
            {"name": "lognormal", "tail": LOGNORMAL_UNIT, "zeta_ref": "lognormal"},
            {"name": "super", "tail": SUPER_TREND, "zeta_ref": "super"},
        ],
    },
}

_RUNNERS = {
    "marginal-gumbel": _exp_marginal_gumbel,
    "hitting-law": _exp_hitting_law,
    "self-affinity": _exp_self_affinity,
    "stationarity": _exp_stationarity,
    "intersection-scaling": _exp_intersection_scaling,
    "range-stats": _exp_range_stats,
    "centering-phenomenon": _exp_centering,
    "process-convergence": _exp_process_convergence,
    "mtg4-diagnostics": _exp_mtg4,
}


def list_experiments() -> list[str]:
    return sorted(_RUNNERS)


def default_params(experiment: str) -> dict:
    if experiment not in _DEFAULTS:
        raise KeyError(f"unknown experiment {experiment!r}")
    return json.loads(json.dumps(_DEFAULTS[experiment]))


def _merge(base: dict, override: dict) -> dict:
    out = dict(base)
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def run_experiment(config: ExperimentConfig) -> tuple[ResultRecord, dict | None]:
    """Run one named experiment; returns (record, optional CSV sample columns)."""
    if config.experiment not in _RUNNERS:
        raise KeyError(f"unknown experiment {config.experiment!r}")
    params = _merge(default_params(config.experiment), config.params)
    t0 = time.perf_counter()
    results, checks, samples = _RUNNERS[config.experiment](
        params, config.seed, config.workers
    )
    elapsed = time.perf_counter() - t0
    record = ResultRecord(
        experiment=config.experiment,
        config={
            "params": params,
            "seed": config.seed,
            "workers": config.workers,
            "backend": get_backend(),
        },
        results=results,
        checks=checks,
        passed=all(c["passed"] for c in checks),
        wall_clock_s=elapsed,
        seed=config.seed,
    )
    return record, samples


def write_samples_csv(path, samples: dict) -> None:
    """Long-format CSV: case, replicate, value; full float precision."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("case,replicate,value\n")
        for name, vals in samples.items():
            for i, v in enumerate(np.asarray(vals).ravel()):
                fh.write(f"{name},{i},{v:.17g}\n")
