import numpy as np
import pytest

from bogodiag.config import Tolerances
from bogodiag.core.quadratic_model import bogoliubov_1947_pair, random_hamiltonian, validate_hamiltonian


@pytest.fixture
def tol() -> Tolerances:
    return Tolerances()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240613)


@pytest.fixture
def scalar(tol):
    """h = 1, k = 0.6: xi = 0.8, E0 = -0.1."""
    return validate_hamiltonian([[1.0]], [[0.6]], tol)


@pytest.fixture
def pair(tol):
    """p = rho = 1, vhat = 0.5: h = 1.5 I, k = 0.5 sigma_x, xi = sqrt(2) twice."""
    return bogoliubov_1947_pair(1.0, 1.0, 0.5, tol)


@pytest.fixture
def random_instances(tol):
    def factory(count: int, n_max: int = 6, norm_G_max: float = 0.8, seed: int = 7, commuting: bool = False):
        gen = np.random.default_rng(seed)
        return [
            random_hamiltonian(gen, int(gen.integers(1, n_max + 1)), norm_G_max=norm_G_max, commuting=commuting, tol=tol)
            for _ in range(count)
        ]
    return factory
