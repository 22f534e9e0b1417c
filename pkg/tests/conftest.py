import numpy as np
import pytest

import qcx


@pytest.fixture(scope="session")
def grid64():
    return qcx.build_grid(64)


@pytest.fixture(scope="session")
def grid128():
    return qcx.build_grid(128)


@pytest.fixture(scope="session")
def grid256():
    return qcx.build_grid(256)


@pytest.fixture(scope="session")
def solve_bank(grid256):
    """Lazy cache of n=256 solves keyed by (p, k, seed); shared across tests."""
    cache = {}

    def get(p: float, k: float, seed: int):
        key = (p, k, seed)
        if key not in cache:
            mu = qcx.random_dilatation(grid256, k, seed)
            cache[key] = (mu, qcx.solve_beltrami(mu, p, tol=1e-8))
        return cache[key]

    return get


@pytest.fixture(scope="session")
def constant_solution_256(grid256):
    """mu = 0.2 on the disk, p = 0: the closed-form one-term case."""
    mu = qcx.DilatationField.constant(grid256, 0.2)
    return mu, qcx.solve_beltrami(mu, 0.0, tol=1e-8)


def sample_disk_points(rng, count, r_lo=0.0, r_hi=0.9):
    r = np.sqrt(rng.random(count)) * (r_hi - r_lo) + r_lo
    return r * np.exp(2j * np.pi * rng.random(count))
