import math

import numpy as np
import pytest

from bogodiag.core.commutative_oracle import (
    CommutativeInstance,
    closed_form_diagonalize,
    comparison_tolerance,
    oracle_compare,
    random_commutative_instance,
)
from bogodiag.core.errors import DimensionMismatch, InvalidParameter, OutOfRegime


def test_closed_form_scalar():
    closed = closed_form_diagonalize(CommutativeInstance(h_diag=[1.0], k_diag=[0.6]))
    np.testing.assert_allclose(closed.transform.U, [[1.0606601717798212]])
    np.testing.assert_allclose(closed.transform.V, [[-0.3535533905932738]])
    np.testing.assert_allclose(closed.xi_diag, [0.8])
    assert closed.norm_V == pytest.approx(math.sqrt(2))
    assert closed.ground_energy == pytest.approx(-0.1)


def test_closed_form_is_symplectic(rng):
    C = random_commutative_instance(rng, 5)
    T = closed_form_diagonalize(C).transform
    S = np.diag([1.0] * 5 + [-1.0] * 5)
    np.testing.assert_allclose(T.full.conj().T @ S @ T.full, S, atol=1e-12)


def test_closed_form_norm_saturates_bound(rng):
    C = random_commutative_instance(rng, 4)
    G = np.max(np.abs(C.k_diag) / C.h_diag)
    assert closed_form_diagonalize(C).norm_V == pytest.approx(((1 + G) / (1 - G)) ** 0.25, rel=1e-12)


def test_scalar_comparison(tol):
    comparison = oracle_compare(CommutativeInstance(h_diag=[1.0], k_diag=[0.6]), tol)
    assert comparison.max_deviation < 1e-12
    assert comparison.energy_bracket == (pytest.approx(-0.18), pytest.approx(-0.09))
    assert comparison.energy_in_bracket
    assert comparison.passed


def test_random_comparisons_pass(tol):
    gen = np.random.default_rng(99)
    for _ in range(50):
        C = random_commutative_instance(gen, int(gen.integers(1, 7)), ratio=0.9)
        comparison = oracle_compare(C, tol)
        assert comparison.max_deviation < 1e-10
        assert comparison.passed


def test_zero_pairing_has_no_deviation(tol):
    comparison = oracle_compare(CommutativeInstance(h_diag=[0.7, 1.3], k_diag=[0.0, 0.0]), tol)
    assert comparison.dev_xi < 1e-14
    assert comparison.dev_energy < 1e-14
    assert comparison.norm_G == 0.0


def test_instance_validation():
    with pytest.raises(OutOfRegime):
        CommutativeInstance(h_diag=[1.0, 2.0], k_diag=[0.5, -2.0])
    with pytest.raises(InvalidParameter):
        CommutativeInstance(h_diag=[0.0], k_diag=[0.0])
    with pytest.raises(DimensionMismatch):
        CommutativeInstance(h_diag=[1.0, 2.0], k_diag=[0.5])


@pytest.mark.parametrize("norm_G, expected", [(0.0, 1e-10), (0.9, 1e-10), (0.99, 1e-10), (0.999, 1e-9)])
def test_comparison_tolerance(norm_G, expected):
    assert comparison_tolerance(norm_G) == pytest.approx(expected)
