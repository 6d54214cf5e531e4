import numpy as np
import pytest

from extremal import get_backend, set_backend

SEED = 20260810


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def numpy_backend():
    """Force the vectorized fallback for the duration of one test."""
    prev = get_backend()
    set_backend("numpy")
    yield
    set_backend(prev)


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the numba kernels once so timed tests measure compute only."""
    from extremal import ReturnLaw, sample_visit_set
    from extremal import kernels
    from extremal.renewal import WanderingTable

    law = ReturnLaw(0.3)
    table = WanderingTable(law)
    r = np.random.default_rng(0)
    W = table.prefix(2000)
    kernels.phi_batch(0.3, 0.0, 4, r)
    kernels.phi_batch(0.3, 0.5, 4, r)
    sample_visit_set(law, 2000, r, table=table)
    kernels.visit_min_batch(W, 2000, 4, r)
    kernels.sojourn_counts(0.3, 0.0, 100, 4, r)
    kernels.hit_count(0.3, 0.0, 100, 4, r)
    kernels.intersect_count(W, 0.3, 0.0, 2000, 0.0, 2000.0, 4, r)
    kernels.quenched_estimates(W, 0.3, 0.0, 2000, 0.0, 2000.0, 1, 100, r)
    kernels.measure_values(
        W, 0.3, 2000, np.array([0.0]), np.array([2000.0]), 50, 2, r
    )
    kernels.path_pairs(W, 0.3, 0.0, 2000, np.array([1.0, 2.0]), r)
