import math

import numpy as np
import pytest

from bogodiag.core.diagonalizer import diagonalize
from bogodiag.core.errors import (
    CutoffTooTight,
    DimensionMismatch,
    DimensionOverflow,
    InvalidParameter,
    NotNormalized,
)
from bogodiag.core.fock_oracle import (
    assemble,
    build_fock_space,
    ccr_defect,
    creation,
    edge_weight,
    exact_spectrum,
    fock_dimension,
    fock_state,
    fock_vacuum,
    ground_state,
    number_operator,
    state_density_matrices,
    wick_check,
)
from bogodiag.core.quadratic_model import random_hamiltonian


def test_basis_order_and_dimension():
    F = build_fock_space(2, 3)
    assert F.dim == fock_dimension(2, 3) == 10
    assert F.basis[:4] == ((0, 0), (1, 0), (0, 1), (2, 0))
    assert F.index[(0, 3)] == F.dim - 1


def test_space_parameters_are_checked():
    with pytest.raises(InvalidParameter):
        build_fock_space(1, 1)
    with pytest.raises(InvalidParameter):
        build_fock_space(0, 4)
    with pytest.raises(DimensionOverflow):
        build_fock_space(3, 20, dim_max=100)


def test_ladder_matrix_elements():
    F = build_fock_space(1, 5)
    raised = creation(F, 0) @ fock_state(F, (1,))
    np.testing.assert_allclose(raised, math.sqrt(2) * fock_state(F, (2,)))
    lowered = F.ladder[0] @ fock_state(F, (3,))
    np.testing.assert_allclose(lowered, math.sqrt(3) * fock_state(F, (2,)))


def test_ccr_interior_defect_is_zero():
    assert ccr_defect(build_fock_space(2, 6)) < 1e-14


def test_number_operator():
    F = build_fock_space(2, 4)
    assert number_operator(F).expectation(fock_state(F, (1, 2))).real == pytest.approx(3.0)


def test_weyl_identity(rng, tol):
    F = build_fock_space(2, 6)
    for _ in range(5):
        Q = random_hamiltonian(rng, 2, tol=tol)
        normal = assemble(Q, F, "normal_ordered").matrix
        weyl = assemble(Q, F, "weyl").matrix
        shift = 0.5 * np.real(np.trace(Q.h))
        np.testing.assert_allclose(weyl, normal + shift * np.eye(F.dim), atol=1e-12)


def test_pair_creation_matrix_element(scalar):
    F = build_fock_space(1, 10)
    H = assemble(scalar, F).matrix
    # 1/2 k a*a* takes |0> to 1/2 * 0.6 * sqrt(2) |2>
    assert H[F.index[(2,)], F.index[(0,)]] == pytest.approx(0.3 * math.sqrt(2))


def test_scalar_spectrum_matches_diagonalizer(scalar):
    F = build_fock_space(1, 40)
    levels = exact_spectrum(assemble(scalar, F), 3)
    np.testing.assert_allclose(levels, [-0.1, 0.7, 1.5], atol=1e-9)


def test_pair_lowest_levels(pair):
    F = build_fock_space(2, 30)
    e0 = math.sqrt(2) - 1.5
    levels = exact_spectrum(assemble(pair, F), 3)
    np.testing.assert_allclose(levels, [e0, e0 + math.sqrt(2), e0 + math.sqrt(2)], atol=1e-6)


def test_spectrum_converges_from_above_as_cutoff_grows(scalar):
    # nested truncations of the same operator: each level can only move down
    spectra = [exact_spectrum(assemble(scalar, build_fock_space(1, n_max)), 3) for n_max in (10, 20, 40)]
    for coarse, fine in zip(spectra, spectra[1:]):
        assert np.all(fine <= coarse + 1e-12)
    errors = [np.max(np.abs(levels - [-0.1, 0.7, 1.5])) for levels in spectra]
    assert errors[0] >= errors[1] >= errors[2]
    assert errors[2] < 1e-8


def test_pair_ground_state(pair, tol):
    F = build_fock_space(2, 30)
    energy, psi = ground_state(assemble(pair, F))
    assert energy == pytest.approx(math.sqrt(2) - 1.5, abs=1e-9)
    s = state_density_matrices(psi, F)
    expected = diagonalize(pair, tol).ground_state
    np.testing.assert_allclose(s.gamma, expected.gamma, atol=1e-8)
    np.testing.assert_allclose(s.alpha, expected.alpha, atol=1e-8)


def test_ground_state_is_gaussian(scalar):
    F = build_fock_space(1, 40)
    _, psi = ground_state(assemble(scalar, F))
    assert edge_weight(psi, F) < 1e-12
    assert wick_check(psi, F) < 1e-9


def test_wick_holds_on_vacuum():
    F = build_fock_space(2, 6)
    assert wick_check(fock_vacuum(F), F) < 1e-14


def test_wick_fails_on_two_particle_state():
    F = build_fock_space(1, 10)
    assert wick_check(fock_state(F, (2,)), F) == pytest.approx(6.0)


def test_wick_needs_room_below_cutoff():
    F = build_fock_space(1, 4)
    with pytest.raises(CutoffTooTight):
        wick_check(fock_state(F, (3,)), F)


def test_density_matrices_need_normalized_state():
    F = build_fock_space(1, 4)
    with pytest.raises(NotNormalized):
        state_density_matrices(2 * fock_vacuum(F), F)


def test_assemble_checks_arguments(scalar):
    with pytest.raises(DimensionMismatch):
        assemble(scalar, build_fock_space(2, 3))
    with pytest.raises(InvalidParameter):
        assemble(scalar, build_fock_space(1, 3), form="anti_normal")


def test_weyl_scratch_space_respects_dim_max(pair):
    F = build_fock_space(2, 20)
    assert F.dim == 231 and fock_dimension(2, 21) == 253
    with pytest.raises(DimensionOverflow):
        assemble(pair, F, form="weyl", dim_max=F.dim)
    assert assemble(pair, F, form="normal_ordered", dim_max=F.dim).matrix.shape == (231, 231)
    assert assemble(pair, F, form="weyl", dim_max=253).matrix.shape == (231, 231)
