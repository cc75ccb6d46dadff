import math

import numpy as np
import pytest
from scipy.stats import unitary_group

from bogodiag.core.diagonalizer import vacuum_state
from bogodiag.core.errors import (
    DimensionMismatch,
    InvalidParameter,
    NotHermitian,
    NotPositiveDefinite,
)
from bogodiag.core.quadratic_model import (
    bogoliubov_1947_pair,
    build_block_operator,
    classify,
    compute_G,
    rotate,
    sandwich_probe,
    state_energy,
    validate_hamiltonian,
)
from bogodiag.core.diagonalizer import diagonalize


def test_validate_drops_antisymmetric_part_of_k(tol):
    Q = validate_hamiltonian(np.eye(2), [[0.0, 1.0], [0.0, 0.0]], tol)
    np.testing.assert_allclose(Q.k, [[0.0, 0.5], [0.5, 0.0]])


def test_validate_rejects_bad_shapes(tol):
    with pytest.raises(DimensionMismatch):
        validate_hamiltonian(np.ones((2, 3)), np.zeros((2, 3)), tol)
    with pytest.raises(DimensionMismatch):
        validate_hamiltonian(np.eye(2), np.zeros((3, 3)), tol)


def test_validate_rejects_non_hermitian_h(tol):
    with pytest.raises(NotHermitian):
        validate_hamiltonian([[1.0, 0.5], [0.0, 1.0]], np.zeros((2, 2)), tol)


def test_validate_rejects_non_positive_h(tol):
    with pytest.raises(NotPositiveDefinite) as info:
        validate_hamiltonian([[-1.0]], [[0.0]], tol)
    assert info.value.exit_code == 2
    assert info.value.invariant == "h > 0"


def test_validate_rejects_nan(tol):
    with pytest.raises(InvalidParameter):
        validate_hamiltonian([[math.nan]], [[0.0]], tol)


def test_block_operator_structure(pair, tol):
    A = build_block_operator(pair, tol).A
    assert A.shape == (4, 4)
    np.testing.assert_allclose(A, A.conj().T)
    np.testing.assert_allclose(A[:2, 2:], pair.k)


def test_G_scalar():
    Q = validate_hamiltonian([[4.0]], [[1.0]])
    np.testing.assert_allclose(compute_G(Q), [[0.25]])


def test_classify_scalar(scalar, tol):
    report = classify(scalar, tol)
    assert report.norm_G == pytest.approx(0.6)
    assert report.hs_G == pytest.approx(0.6)
    assert report.lower_bound == pytest.approx(-0.18)
    assert report.diagonalizable and report.implementable and report.bounded_below


def test_classify_outside_regime(tol):
    report = classify(validate_hamiltonian([[1.0]], [[1.2]], tol), tol)
    assert report.norm_G == pytest.approx(1.2)
    assert not report.diagonalizable
    assert not report.bounded_below


def test_classify_edge_of_regime(tol):
    report = classify(validate_hamiltonian([[1.0]], [[1.0]], tol), tol)
    assert not report.diagonalizable
    assert report.bounded_below


def test_pair_preset(pair):
    np.testing.assert_allclose(pair.h, 1.5 * np.eye(2))
    np.testing.assert_allclose(pair.k, [[0.0, 0.5], [0.5, 0.0]])


@pytest.mark.parametrize("p, rho, vhat", [(0.0, 1.0, 0.5), (1.0, 0.0, 0.5), (1.0, 1.0, -0.1)])
def test_pair_preset_rejects_bad_parameters(p, rho, vhat):
    with pytest.raises(InvalidParameter):
        bogoliubov_1947_pair(p, rho, vhat)


def test_condition_numbers_are_rotation_invariant(random_instances, tol):
    for Q in random_instances(10):
        W = unitary_group.rvs(Q.n, random_state=3) if Q.n > 1 else np.array([[1j]])
        before, after = classify(Q, tol), classify(rotate(Q, W, tol), tol)
        assert after.norm_G == pytest.approx(before.norm_G, rel=1e-10)
        assert after.hs_G == pytest.approx(before.hs_G, rel=1e-10)
        assert after.lower_bound == pytest.approx(before.lower_bound, rel=1e-10, abs=1e-14)


def test_random_instances_respect_requested_norm(random_instances, tol):
    for Q in random_instances(20, norm_G_max=0.5):
        assert classify(Q, tol).norm_G <= 0.5 + 1e-12


def test_state_energy_of_vacuum_is_zero(scalar):
    assert state_energy(scalar, vacuum_state(1)) == 0.0


def test_sandwich_probe_reports_without_asserting(scalar, tol):
    ground = diagonalize(scalar, tol).ground_state
    probe = sandwich_probe(scalar, [vacuum_state(1), ground], tol)
    assert probe.samples == 2
    assert probe.delta == pytest.approx(0.36)
    assert probe.trace_term == pytest.approx(0.36)
    assert probe.min_slack_lower_bound >= -1e-12
    assert probe.min_slack_upper_printed >= -1e-12
    # E0 = -0.1 lies below (1 + 0.6) * 0.125 - 0.6 * 0.18 = 0.092
    assert probe.violations_lower_printed == 1


def test_sandwich_probe_needs_states(scalar):
    with pytest.raises(InvalidParameter):
        sandwich_probe(scalar, [])
