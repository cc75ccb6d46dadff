import math

import numpy as np
import pytest

from bogodiag.core.diagonalizer import QuasiFreeState, diagonalize, transform_state, vacuum_state
from bogodiag.core.dynamics import ConstantDrive, DynamicsProblem, Trajectory, evolve, observed_order
from bogodiag.core.errors import GridTooCoarse, NotHermitian, NotPure
from bogodiag.core.tddiag import (
    PairingGenerator,
    cosh_sinh_series,
    generator_to_transform,
    random_pure_state,
    state_to_transform,
    takagi,
    tddiag_residual,
    transform_to_generator,
)


def _random_symmetric(gen, n):
    z = gen.normal(size=(n, n)) + 1j * gen.normal(size=(n, n))
    return z + z.T


def test_takagi_random(rng):
    k = _random_symmetric(rng, 4)
    W, d = takagi(k)
    np.testing.assert_allclose(W @ np.diag(d) @ W.T, k, atol=1e-10)
    np.testing.assert_allclose(W.conj().T @ W, np.eye(4), atol=1e-10)
    assert np.all(np.diff(d) <= 0)
    np.testing.assert_allclose(d, np.linalg.svd(k, compute_uv=False), atol=1e-10)


def test_takagi_degenerate_singular_values():
    k = np.array([[0.0, 1.0], [1.0, 0.0]])
    W, d = takagi(k)
    np.testing.assert_allclose(d, [1.0, 1.0])
    np.testing.assert_allclose(W @ np.diag(d) @ W.T, k, atol=1e-12)


def test_takagi_completes_zero_singular_values():
    k = np.diag([2.0j, 0.0, 0.0])
    W, d = takagi(k)
    np.testing.assert_allclose(d, [2.0, 0.0, 0.0])
    np.testing.assert_allclose(W.conj().T @ W, np.eye(3), atol=1e-12)
    np.testing.assert_allclose(W @ np.diag(d) @ W.T, k, atol=1e-12)


def test_closed_form_matches_series(rng):
    kgen = 0.3 * _random_symmetric(rng, 3)
    T = generator_to_transform(PairingGenerator(kgen=kgen), check_series=True)
    cosh_s, sinh_s = cosh_sinh_series(kgen)
    np.testing.assert_allclose(T.U, cosh_s, atol=1e-10)
    np.testing.assert_allclose(T.V, sinh_s.conj(), atol=1e-10)


def test_generator_transform_is_symplectic(rng):
    T = generator_to_transform(PairingGenerator(kgen=0.4 * _random_symmetric(rng, 3)))
    S = np.diag([1.0] * 3 + [-1.0] * 3)
    np.testing.assert_allclose(T.full.conj().T @ S @ T.full, S, atol=1e-10)


def test_zero_generator_is_identity():
    T = generator_to_transform(PairingGenerator(kgen=np.zeros((2, 2))))
    np.testing.assert_allclose(T.U, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(T.V, 0, atol=1e-14)


def test_scalar_ground_state_generator(scalar, tol):
    g = transform_to_generator(diagonalize(scalar, tol).transform, tol)
    np.testing.assert_allclose(g.kgen, [[-math.log(2) / 4]], atol=1e-10)


def test_generator_round_trip_keeps_state(random_instances, tol):
    for Q in random_instances(10, seed=12):
        T = diagonalize(Q, tol).transform
        g = transform_to_generator(T, tol)
        expected = transform_state(T, vacuum_state(Q.n), "forward", tol)
        rebuilt = transform_state(generator_to_transform(g), vacuum_state(Q.n), "forward", tol)
        np.testing.assert_allclose(rebuilt.gamma, expected.gamma, atol=1e-8)
        np.testing.assert_allclose(rebuilt.alpha, expected.alpha, atol=1e-8)


def test_state_to_transform_round_trip(tol):
    gen = np.random.default_rng(31)
    for n in (1, 2, 4):
        s = random_pure_state(gen, n, scale=0.6)
        T = state_to_transform(s, tol=tol)
        rebuilt = transform_state(T, vacuum_state(n), "forward", tol)
        np.testing.assert_allclose(rebuilt.gamma, s.gamma, atol=1e-8)
        np.testing.assert_allclose(rebuilt.alpha, s.alpha, atol=1e-8)


def test_mixed_state_is_rejected(tol):
    thermal = QuasiFreeState(gamma=0.5 * np.eye(2), alpha=np.zeros((2, 2)))
    with pytest.raises(NotPure):
        state_to_transform(thermal, tol=tol)


def test_generator_must_be_symmetric():
    with pytest.raises(NotHermitian):
        PairingGenerator(kgen=[[0.0, 1.0], [0.0, 0.0]])


def _pair_quench(pair, dt, T=1.0):
    return DynamicsProblem(drive=ConstantDrive(h=pair.h, k2=pair.k), T=T, dt=dt)


def test_residual_vanishes_along_true_dynamics(pair, tol):
    P = _pair_quench(pair, 0.01)
    residual = tddiag_residual(evolve(P, vacuum_state(2), tol), P, tol)
    assert residual.times.size == P.steps - 1
    assert residual.max_residual < 1e-3


def test_residual_converges_at_second_order(pair, tol):
    errors = []
    for dt in (0.02, 0.01, 0.005):
        P = _pair_quench(pair, dt)
        errors.append(tddiag_residual(evolve(P, vacuum_state(2), tol), P, tol).max_residual)
    assert np.all(observed_order(errors) > 1.8)


def test_residual_detects_wrong_hamiltonian(pair, tol):
    P = _pair_quench(pair, 0.01)
    traj = evolve(P, vacuum_state(2), tol)
    other = DynamicsProblem(drive=ConstantDrive(h=pair.h, k2=-pair.k), T=1.0, dt=0.01)
    assert tddiag_residual(traj, other, tol).max_residual > 0.1


def test_residual_needs_three_samples(pair, tol):
    P = _pair_quench(pair, 0.5)
    traj = evolve(P, vacuum_state(2), tol)
    short = Trajectory(times=traj.times[:2], states=traj.states[:2], monitors=traj.monitors[:2])
    with pytest.raises(GridTooCoarse):
        tddiag_residual(short, P, tol)


def test_residual_flags_trajectory_with_alpha_removed(pair, tol):
    P = _pair_quench(pair, 0.01)
    traj = evolve(P, vacuum_state(2), tol)
    stripped = Trajectory(
        times=traj.times,
        states=tuple(QuasiFreeState(gamma=s.gamma, alpha=np.zeros_like(s.alpha)) for s in traj.states),
        monitors=traj.monitors,
    )
    assert tddiag_residual(stripped, P, tol).max_residual >= 0.1 * np.linalg.norm(pair.k)


def test_residual_on_uneven_final_step(pair, tol):
    P = _pair_quench(pair, 0.015)
    assert P.times[-1] - P.times[-2] < P.dt
    residual = tddiag_residual(evolve(P, vacuum_state(2), tol), P, tol)
    assert residual.max_residual < 1e-3


def test_state_generator_triangle_over_random_states(tol):
    gen = np.random.default_rng(5)
    for _ in range(50):
        n = int(gen.integers(1, 5))
        s = random_pure_state(gen, n, scale=float(gen.uniform(0.1, 0.8)))
        T = state_to_transform(s, tol=tol)
        g = transform_to_generator(T, tol)
        rebuilt = transform_state(generator_to_transform(g), vacuum_state(n), "forward", tol)
        np.testing.assert_allclose(rebuilt.gamma, s.gamma, atol=1e-8)
        np.testing.assert_allclose(rebuilt.alpha, s.alpha, atol=1e-8)
