import numpy as np
import pytest

from antibunch import (ModeDims, SystemParams, build_collapse_ops,
                       build_hamiltonian, build_liouvillian, steady_state)


def solve_steady(params):
    """Steady state plus its Liouvillian, the way every test wants it."""
    liou = build_liouvillian(build_hamiltonian(params), build_collapse_ops(params))
    return liou, steady_state(liou)


@pytest.fixture
def default_dims():
    return ModeDims(4, 4, 6)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_density_matrix(rng, dims):
    """Random full-rank valid state (for property checks)."""
    d = dims.total
    raw = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = raw @ raw.conj().T
    return rho / rho.trace()
