"""Simulation and verification toolkit for extremes of long-memory processes.

Builds stationary infinitely divisible sequences whose extremes cluster
under null-recurrent renewal dynamics, samples their limiting random
sup-measure, and checks the limit laws, scaling relations, and centering
behavior by Monte Carlo and deterministic numerics.
"""

from ._backend import get_backend, set_backend
from .errors import DomainError, ResourceLimitError
from .renewal import (
    ReturnLaw,
    VisitSet,
    WanderingTable,
    hit_prob_mc,
    intersection_prob_mc,
    mean_sojourn_mc,
    quenched_intersection_mc,
    sample_phi,
    sample_visit_set,
    wandering,
)
from .regen import RegenSetApprox, disjointness_mc, hits_interval, sample_regen_set
from .stats import binomial_ci, ks_one_sample, ks_two_sample, loglog_slope
from .supmeasure import (
    IntervalFamily,
    LimitSupMeasureSample,
    extremal_fdd_cdf,
    gumbel_marginal_cdf,
    sample_limit_measure,
    sample_measure_values,
    self_affinity_check,
    stationarity_check,
)
from .tails import (
    LognormalTail,
    NormalizingSequences,
    SuperLognormalTail,
    TailModel,
    aux_h,
    centering_ratio,
    family_from_dict,
    mtg4_diagnostics,
    normalizers,
    nu_bar,
    quantile_G,
    quantile_V,
    unit_scaled,
    zeta,
)
from .process import (
    EmpiricalSupMeasure,
    PathSample,
    normalize,
    running_max_path,
    simulate_path,
    sup_measure_eval,
)
from .seeding import seed_substream
from .experiments import ExperimentConfig, ResultRecord, list_experiments, run_experiment

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "EmpiricalSupMeasure",
    "ExperimentConfig",
    "IntervalFamily",
    "LimitSupMeasureSample",
    "LognormalTail",
    "NormalizingSequences",
    "PathSample",
    "RegenSetApprox",
    "ResourceLimitError",
    "ResultRecord",
    "ReturnLaw",
    "SuperLognormalTail",
    "TailModel",
    "VisitSet",
    "WanderingTable",
    "aux_h",
    "binomial_ci",
    "centering_ratio",
    "disjointness_mc",
    "extremal_fdd_cdf",
    "family_from_dict",
    "get_backend",
    "gumbel_marginal_cdf",
    "hit_prob_mc",
    "hits_interval",
    "intersection_prob_mc",
    "ks_one_sample",
    "ks_two_sample",
    "list_experiments",
    "loglog_slope",
    "mean_sojourn_mc",
    "mtg4_diagnostics",
    "normalize",
    "normalizers",
    "nu_bar",
    "quantile_G",
    "quantile_V",
    "quenched_intersection_mc",
    "run_experiment",
    "running_max_path",
    "sample_limit_measure",
    "sample_measure_values",
    "sample_phi",
    "sample_regen_set",
    "sample_visit_set",
    "seed_substream",
    "self_affinity_check",
    "set_backend",
    "simulate_path",
    "stationarity_check",
    "sup_measure_eval",
    "unit_scaled",
    "wandering",
    "zeta",
]
