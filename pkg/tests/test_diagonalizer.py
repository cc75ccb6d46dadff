import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import unitary_group

from bogodiag.common.utils import symplectic_form
from bogodiag.core.diagonalizer import (
    BogoliubovTransform,
    QuasiFreeState,
    check_state,
    diagonalize,
    ground_state_data,
    from_full,
    identity_transform,
    symplectic_inverse,
    transform_norms,
    transform_state,
    vacuum_state,
    verify_transform,
)
from bogodiag.core.errors import DimensionMismatch, NotDiagonalizable, NotHermitian
from bogodiag.core.quadratic_model import classify, rotate, validate_hamiltonian


def _check(Q, result, tol):
    report = classify(Q, tol)
    return verify_transform(result.transform, (report.norm_G, report.hs_G))


def test_scalar_golden_values(scalar, tol):
    result = diagonalize(scalar, tol)
    T = result.transform
    np.testing.assert_allclose(result.xi, [[0.8]], atol=1e-12)
    assert result.ground_energy == pytest.approx(-0.1, abs=1e-12)
    # U and V are fixed up to a joint phase
    assert abs(T.U[0, 0]) == pytest.approx(1.0606601717798212, abs=1e-10)
    assert abs(T.V[0, 0]) == pytest.approx(0.3535533905932738, abs=1e-10)
    assert np.real(T.V[0, 0] / T.U[0, 0]) == pytest.approx(-1 / 3, abs=1e-10)
    np.testing.assert_allclose(result.ground_state.gamma, [[0.125]], atol=1e-12)
    np.testing.assert_allclose(result.ground_state.alpha, [[-0.375]], atol=1e-12)


def test_scalar_saturates_norm_bound(scalar, tol):
    check = _check(scalar, diagonalize(scalar, tol), tol)
    assert check.norm_V_full == pytest.approx(math.sqrt(2), abs=1e-10)
    assert check.norm_bound == pytest.approx(math.sqrt(2))
    assert check.slack_norm >= -1e-12
    assert check.hs_bound == pytest.approx(3.0)


def test_pair_preset(pair, tol):
    result = diagonalize(pair, tol)
    np.testing.assert_allclose(result.xi_eigs, [math.sqrt(2), math.sqrt(2)], atol=1e-12)
    assert result.ground_energy == pytest.approx(math.sqrt(2) - 1.5, abs=1e-12)


def test_zero_pairing_gives_unitary_transform(tol):
    Q = validate_hamiltonian(np.diag([1.0, 2.0]), np.zeros((2, 2)), tol)
    result = diagonalize(Q, tol)
    T = result.transform
    np.testing.assert_allclose(T.V, 0, atol=1e-12)
    np.testing.assert_allclose(T.U @ T.U.conj().T, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(result.xi_eigs, [1.0, 2.0], atol=1e-12)
    assert result.ground_energy == pytest.approx(0.0, abs=1e-14)


def test_not_diagonalizable(tol):
    Q = validate_hamiltonian([[1.0]], [[1.2]], tol)
    with pytest.raises(NotDiagonalizable) as info:
        diagonalize(Q, tol)
    assert info.value.exit_code == 2


def test_random_instances_satisfy_bounds(random_instances, tol):
    for Q in random_instances(200):
        result = diagonalize(Q, tol)
        check = _check(Q, result, tol)
        assert check.max_residual <= 1e-9 * max(1.0, check.norm_V_full ** 2)
        assert check.slack_norm >= -1e-9
        assert check.slack_hs >= -1e-9
        assert result.offdiag_residual <= 1e-8 * max(1.0, np.linalg.norm(np.block([[Q.h, Q.k], [Q.k.conj(), Q.h.conj()]])))


def test_ground_energy_matches_trace_formula(random_instances, tol):
    for Q in random_instances(30, seed=11):
        result = diagonalize(Q, tol)
        expected = 0.5 * (np.sum(result.xi_eigs) - np.real(np.trace(Q.h)))
        assert result.ground_energy == pytest.approx(expected, abs=1e-9)
        assert result.ground_energy >= classify(Q, tol).lower_bound - 1e-9


def test_spectrum_invariant_under_mode_rotation(random_instances, tol):
    for Q in random_instances(10, seed=5):
        if Q.n == 1:
            continue
        W = unitary_group.rvs(Q.n, random_state=1)
        before = diagonalize(Q, tol)
        after = diagonalize(rotate(Q, W, tol), tol)
        np.testing.assert_allclose(after.xi_eigs, before.xi_eigs, atol=1e-9)
        assert after.ground_energy == pytest.approx(before.ground_energy, abs=1e-9)


def test_symplectic_inverse(random_instances, tol):
    for Q in random_instances(5, seed=2):
        T = diagonalize(Q, tol).transform
        product = T.full @ symplectic_inverse(T).full
        np.testing.assert_allclose(product, np.eye(2 * Q.n), atol=1e-9)


def test_from_full_rebuilds_blocks(scalar, tol):
    T = diagonalize(scalar, tol).transform
    again = from_full(T.full)
    np.testing.assert_array_equal(again.U, T.U)
    np.testing.assert_array_equal(again.V, T.V)


def test_identity_transform_norms():
    T = identity_transform(3)
    S = symplectic_form(3)
    np.testing.assert_allclose(T.full.conj().T @ S @ T.full, S)
    norm_full, hs_V = transform_norms(T)
    assert norm_full == pytest.approx(1.0)
    assert hs_V == 0.0


def test_vacuum_goes_to_ground_state(pair, tol):
    result = diagonalize(pair, tol)
    image = transform_state(result.transform, vacuum_state(2), "forward", tol)
    np.testing.assert_allclose(image.gamma, result.ground_state.gamma, atol=1e-12)
    np.testing.assert_allclose(image.alpha, result.ground_state.alpha, atol=1e-12)


def test_transport_round_trip(random_instances, tol):
    for Q in random_instances(10, seed=3):
        result = diagonalize(Q, tol)
        s = result.ground_state
        there = transform_state(result.transform, s, "forward", tol)
        back = transform_state(result.transform, there, "inverse", tol)
        np.testing.assert_allclose(back.gamma, s.gamma, atol=1e-8)
        np.testing.assert_allclose(back.alpha, s.alpha, atol=1e-8)


def test_inverse_transport_maps_ground_state_to_vacuum(scalar, tol):
    result = diagonalize(scalar, tol)
    back = transform_state(result.transform, result.ground_state, "inverse", tol)
    np.testing.assert_allclose(back.gamma, 0, atol=1e-12)
    np.testing.assert_allclose(back.alpha, 0, atol=1e-12)


def test_transport_rejects_unknown_direction(scalar, tol):
    with pytest.raises(ValueError):
        transform_state(diagonalize(scalar, tol).transform, vacuum_state(1), "sideways", tol)


def test_transport_rejects_size_mismatch(scalar, tol):
    with pytest.raises(DimensionMismatch):
        transform_state(diagonalize(scalar, tol).transform, vacuum_state(2), "forward", tol)


def test_check_state_rejects_non_symmetric_alpha(tol):
    s = QuasiFreeState(gamma=np.eye(2), alpha=[[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(NotHermitian):
        check_state(s, tol)


def test_transform_requires_square_blocks():
    with pytest.raises(DimensionMismatch):
        BogoliubovTransform(U=np.eye(2), V=np.zeros((3, 3)))


@settings(max_examples=50, deadline=None)
@given(h=st.floats(0.1, 10.0), ratio=st.floats(-0.95, 0.95))
def test_scalar_closed_form(h, ratio):
    k = ratio * h
    result = diagonalize(validate_hamiltonian([[h]], [[k]]))
    xi = math.sqrt(h * h - k * k)
    assert result.xi_eigs[0] == pytest.approx(xi, rel=1e-10)
    assert result.ground_energy == pytest.approx(0.5 * (xi - h), abs=1e-10 * h)


def test_ground_state_data_scalar(scalar, tol):
    result = diagonalize(scalar, tol)
    state, energy = ground_state_data(scalar, result.transform, tol)
    assert state.gamma[0, 0].real == pytest.approx(0.125, abs=1e-12)
    assert state.alpha[0, 0].real == pytest.approx(-0.375, abs=1e-12)
    assert energy == pytest.approx(-0.1, abs=1e-12)


def test_ground_state_data_identity_is_vacuum(scalar, tol):
    state, energy = ground_state_data(scalar, identity_transform(1), tol)
    assert np.allclose(state.gamma, 0.0)
    assert np.allclose(state.alpha, 0.0)
    assert energy == pytest.approx(0.0)


def test_ground_state_data_dimension_mismatch(scalar, tol):
    with pytest.raises(DimensionMismatch):
        ground_state_data(scalar, identity_transform(2), tol)
