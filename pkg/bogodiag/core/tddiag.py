# bogodiag/core/tddiag.py
"""
Pure quasi-free states, Bogoliubov transforms and their pairing generators.

A symmetric generator k = W D W^T (Takagi) gives the transform

    U = cosh(2k) = W cosh(2D) W*,    V = conj(sinh(2k)) = conj(W) sinh(2D) W*,

where cosh and sinh are the series in (2k)(2 conj(k)) with interleaved conjugates. The vacuum
transported by it has alpha = W sinh(4D)/2 W^T, which is how the inverse maps recover D.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy import linalg as la

from ..common.utils import hs_norm, max_norm, op_norm, symm_defect, symmetrize, symplectic_form
from ..config import Tolerances, get_tolerances
from .diagonalizer import BogoliubovTransform, QuasiFreeState, generalized_density_matrix, transform_state, vacuum_state
from .dynamics import DynamicsProblem, Trajectory, purity_witnesses
from .errors import (
    CompletionFailure,
    DimensionMismatch,
    GaugeObstruction,
    GridTooCoarse,
    NotHermitian,
    NotPure,
    TakagiFailure,
)

logger = logging.getLogger(__name__)

TAKAGI_TOL = 1e-8
SERIES_TOL = 1e-10
ROUND_TRIP_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class PairingGenerator:
    kgen: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        kgen = np.array(self.kgen, dtype=complex, copy=True)
        if kgen.ndim == 0:
            kgen = kgen.reshape(1, 1)
        if kgen.ndim != 2 or kgen.shape[0] != kgen.shape[1]:
            raise DimensionMismatch(f"generator must be square, got shape {kgen.shape}.")
        defect = symm_defect(kgen)
        if defect > get_tolerances().sym_tol(max_norm(kgen)):
            raise NotHermitian(f"generator is not symmetric (defect {defect:.3e}).",
                               invariant="kgen = kgen^T", anchor="explicit form of pure quasi-free states")
        kgen = symmetrize(kgen)
        kgen.setflags(write=False)
        object.__setattr__(self, "kgen", kgen)
        object.__setattr__(self, "n", int(kgen.shape[0]))


@dataclass(frozen=True, eq=False)
class TddiagResidual:
    times: np.ndarray
    gamma_residual: np.ndarray
    alpha_residual: np.ndarray

    @property
    def max_residual(self) -> float:
        return float(max(np.max(self.gamma_residual), np.max(self.alpha_residual)))


# ─── Takagi factorization ───────────────────────────────────────────────────

def takagi(k: np.ndarray, tol: float = TAKAGI_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """
    Factor a complex symmetric matrix as k = W diag(d) W^T with W unitary and d >= 0 descending.

    Uses the real symmetric embedding [[Re k, Im k], [Im k, -Re k]]: an eigenvector (x, y) for a
    positive eigenvalue d gives the Takagi vector x + iy with k conj(w) = d w. Vectors for zero
    singular values are completed by an orthonormal complement.

    :raises TakagiFailure: residual of the factorization or of W's unitarity above tol.
    """
    k = np.asarray(k, dtype=complex)
    n = k.shape[0]
    X, Y = k.real, k.imag
    embedding = np.block([[X, Y], [Y, -X]])
    eigvals, eigvecs = la.eigh(embedding)

    threshold = 1e-12 * max(1.0, max_norm(k)) * n
    order = np.argsort(eigvals)[::-1]
    positive = [i for i in order[:n] if eigvals[i] > threshold]
    d = eigvals[positive]
    W = eigvecs[:n, positive] + 1j * eigvecs[n:, positive]
    if len(positive) < n:
        complement = la.null_space(W.conj().T) if positive else np.eye(n, dtype=complex)
        W = np.hstack([W, complement])
        d = np.concatenate([d, np.zeros(n - len(positive))])

    residual = max(max_norm(W @ np.diag(d) @ W.T - k), max_norm(W.conj().T @ W - np.eye(n)))
    if residual > tol * max(1.0, max_norm(k)):
        logger.error(f"Takagi factorization residual {residual:.3e}.")
        raise TakagiFailure(f"Takagi factorization residual {residual:.3e}.",
                            invariant="k = W D W^T, W unitary", anchor="Takagi factorization")
    return W, d


def cosh_sinh_series(k: np.ndarray, max_terms: int = 200) -> Tuple[np.ndarray, np.ndarray]:
    """Direct sums of cosh(2k) = sum ((2k)(2k̄))^m / (2m)! and sinh(2k) = sum ((2k)(2k̄))^m (2k) / (2m+1)!."""
    k = np.asarray(k, dtype=complex)
    two_k = 2 * k
    square = two_k @ two_k.conj()
    n = k.shape[0]
    cosh_term = np.eye(n, dtype=complex)
    sinh_term = two_k.copy()
    cosh_sum = cosh_term.copy()
    sinh_sum = sinh_term.copy()
    for m in range(1, max_terms):
        cosh_term = square @ cosh_term / ((2 * m - 1) * (2 * m))
        sinh_term = square @ sinh_term / ((2 * m) * (2 * m + 1))
        cosh_sum += cosh_term
        sinh_sum += sinh_term
        if max(max_norm(cosh_term), max_norm(sinh_term)) < 1e-18 * max(1.0, max_norm(cosh_sum)):
            break
    return cosh_sum, sinh_sum


# ─── Conversions ────────────────────────────────────────────────────────────

def generator_to_transform(g: PairingGenerator, check_series: bool = True) -> BogoliubovTransform:
    """
    Closed-form transform of a pairing generator.

    :raises TakagiFailure: the factorization fails its residual check, or the closed form disagrees with
        the direct series beyond 1e-10.
    """
    W, d = takagi(g.kgen)
    U = (W * np.cosh(2 * d)) @ W.conj().T
    V = (W.conj() * np.sinh(2 * d)) @ W.conj().T
    if check_series:
        cosh_s, sinh_s = cosh_sinh_series(g.kgen)
        gap = max(max_norm(U - cosh_s), max_norm(V - sinh_s.conj()))
        if gap > SERIES_TOL * max(1.0, max_norm(U)):
            logger.error(f"cosh/sinh closed form and series differ by {gap:.3e}.")
            raise TakagiFailure(f"closed form and series of cosh/sinh differ by {gap:.3e}.",
                                invariant="series = factorized form", anchor="cosh/sinh of the pairing generator")
    return BogoliubovTransform(U=U, V=V)


def _generator_from_alpha(alpha: np.ndarray) -> PairingGenerator:
    W, sigma = takagi(symmetrize(alpha))
    d = np.arcsinh(2 * sigma) / 4
    return PairingGenerator(kgen=(W * d) @ W.T)


def _state_gap(a: QuasiFreeState, b: QuasiFreeState) -> float:
    return max(max_norm(a.gamma - b.gamma), max_norm(a.alpha - b.alpha))


def transform_to_generator(T: BogoliubovTransform, tol: Optional[Tolerances] = None) -> PairingGenerator:
    """
    Symmetric generator whose transform carries the same vacuum state as T.

    Only gauge-invariant data is matched: (gamma, alpha) = (V*V, U* conj(V)), hence also the singular values of V.

    :raises GaugeObstruction: the rebuilt transform does not reproduce T's state to 1e-8.
    """
    tol = tol or get_tolerances()
    target = transform_state(T, vacuum_state(T.n), "forward", tol)
    g = _generator_from_alpha(target.alpha)
    rebuilt = transform_state(generator_to_transform(g), vacuum_state(T.n), "forward", tol)
    gap = _state_gap(rebuilt, target)
    if gap > ROUND_TRIP_TOL * max(1.0, max_norm(target.gamma)):
        logger.error(f"Generator round trip misses the state by {gap:.3e}.")
        raise GaugeObstruction(f"no symmetric generator reproduces the state (gap {gap:.3e}).",
                               invariant="state of exp(generator) = state of T",
                               anchor="explicit form of pure quasi-free states")
    logger.debug(f"transform_to_generator: singular values {np.sort(np.abs(np.linalg.svd(g.kgen, compute_uv=False)))}")
    return g


def state_to_transform(s: QuasiFreeState, purity_tol: Optional[float] = None,
                       tol: Optional[Tolerances] = None) -> BogoliubovTransform:
    """
    Rebuild a Bogoliubov transform whose vacuum image is the pure quasi-free state s.

    For pure states gamma is fixed by alpha (gamma + gamma^2 = alpha alpha*), so the transform comes from
    the Takagi factorization of alpha; gamma is used to check the completion.

    :raises NotPure: ||X||_F + ||Y||_F above purity_tol.
    :raises CompletionFailure: the rebuilt transform misses (gamma, alpha) by more than 1e-8.
    """
    tol = tol or get_tolerances()
    purity_tol = tol.purity_tol if purity_tol is None else purity_tol
    X, Y = purity_witnesses(s)
    impurity = hs_norm(X) + hs_norm(Y)
    if impurity > purity_tol:
        logger.error(f"State impurity {impurity:.3e} exceeds {purity_tol:.1e}.")
        raise NotPure(f"state is not pure quasi-free (||X|| + ||Y|| = {impurity:.3e}).",
                      invariant="X = Y = 0", anchor="pure quasi-free states")

    T = generator_to_transform(_generator_from_alpha(s.alpha), check_series=False)
    rebuilt = transform_state(T, vacuum_state(s.n), "forward", tol)
    gap = _state_gap(rebuilt, s)
    if gap > ROUND_TRIP_TOL * max(1.0, max_norm(s.gamma)):
        logger.error(f"Completed transform misses the state by {gap:.3e}.")
        raise CompletionFailure(f"completed transform reproduces the state only to {gap:.3e}.",
                                invariant="gamma = V*V, alpha = U* conj(V)", anchor="pure quasi-free states")
    return T


def random_pure_state(rng: np.random.Generator, n: int, scale: float = 0.5) -> QuasiFreeState:
    """Vacuum transported by a random symmetric generator with operator norm `scale`."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    kgen = symmetrize(z)
    kgen = kgen * (scale / op_norm(kgen))
    T = generator_to_transform(PairingGenerator(kgen=kgen), check_series=False)
    return transform_state(T, vacuum_state(n), "forward")


# ─── Time-dependent diagonalization residual ────────────────────────────────

def tddiag_residual(traj: Trajectory, P: DynamicsProblem, tol: Optional[Tolerances] = None) -> TddiagResidual:
    """
    Residual R = i dGamma/dt - (S A Gamma - Gamma A S) of the generalized density matrix along a trajectory,
    with A(t) = [[h, K], [conj(K), conj(h)]] and dGamma/dt from three-point differences (second order on uneven grids).

    The (1,1) block is the gamma equation, the (1,2) block the alpha equation; both vanish iff the
    transform carrying the vacuum to Gamma(t) diagonalizes i d/dt + H(t) up to a one-body term.
    Endpoints are excluded.

    :raises GridTooCoarse: fewer than three samples.
    """
    tol = tol or get_tolerances()
    if len(traj.states) < 3:
        raise GridTooCoarse(f"need at least 3 samples for centered differences, got {len(traj.states)}.",
                            invariant="3 samples", anchor="time-dependent diagonalization")
    n = P.n
    S = symplectic_form(n)
    gdms = [generalized_density_matrix(s) for s in traj.states]
    times = np.asarray(traj.times, dtype=float)

    res_gamma, res_alpha = [], []
    for j in range(1, len(gdms) - 1):
        t = float(times[j])
        h, k2 = P.coefficients(t, tol)
        A = np.block([[h, k2], [k2.conj(), h.conj()]])
        before, after = times[j] - times[j - 1], times[j + 1] - times[j]
        derivative = (before ** 2 * gdms[j + 1] - after ** 2 * gdms[j - 1] + (after ** 2 - before ** 2) * gdms[j]) \
            / (before * after * (before + after))
        R = 1j * derivative - (S @ A @ gdms[j] - gdms[j] @ A @ S)
        res_gamma.append(hs_norm(R[:n, :n]))
        res_alpha.append(hs_norm(R[:n, n:]))

    result = TddiagResidual(
        times=times[1:-1],
        gamma_residual=np.array(res_gamma),
        alpha_residual=np.array(res_alpha),
    )
    logger.info(f"tddiag_residual over {result.times.size} interior points: max {result.max_residual:.3e}")
    return result
