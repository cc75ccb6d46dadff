# bogodiag/core/diagonalizer.py
"""
Bogoliubov diagonalization of the block operator A.

With B = A^{1/2} S A^{1/2}, a unitary U_c built from the positive eigenvectors w_i of B and their
conjugate-swap partners Jw_i gives U_c B U_c* = diag(lambda, -lambda); then
V = U_c |B|^{1/2} A^{-1/2} is symplectic (V* S V = S) and V A V* = diag(lambda, lambda).

A transform is stored through its blocks as V = [[U, conj(V)], [V, conj(U)]]; the quasiparticle
annihilators are c = U a - conj(V) a*.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy import linalg as la

from ..common.utils import (
    blocks,
    hermitian_eigh,
    hermitian_power,
    hermitize,
    hs_norm,
    max_norm,
    op_norm,
    swap_matrix,
    symm_defect,
    symmetrize,
    symplectic_form,
)
from ..config import Tolerances, get_tolerances
from .errors import (
    BlockInconsistency,
    BoundViolated,
    DegeneratePairing,
    DimensionMismatch,
    NotDiagonalizable,
    NotHermitian,
)
from .quadratic_model import QuadraticHamiltonian, build_block_operator, classify, state_energy

logger = logging.getLogger(__name__)


# ─── Types ──────────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class BogoliubovTransform:
    """Blocks (U, V) of a Bogoliubov transformation; `full` is [[U, conj(V)], [V, conj(U)]]."""
    U: np.ndarray
    V: np.ndarray
    n: int = field(init=False)
    full: np.ndarray = field(init=False)

    def __post_init__(self):
        U = np.array(self.U, dtype=complex, copy=True)
        V = np.array(self.V, dtype=complex, copy=True)
        if U.shape != V.shape or U.ndim != 2 or U.shape[0] != U.shape[1]:
            raise DimensionMismatch(f"U and V must be equal square blocks, got {U.shape} and {V.shape}.")
        full = np.block([[U, V.conj()], [V, U.conj()]])
        for arr in (U, V, full):
            arr.setflags(write=False)
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "n", int(U.shape[0]))
        object.__setattr__(self, "full", full)


@dataclass(frozen=True, eq=False)
class QuasiFreeState:
    """One-particle density matrices gamma_ij = <a*_j a_i>, alpha_ij = <a_i a_j>."""
    gamma: np.ndarray
    alpha: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        gamma = np.array(self.gamma, dtype=complex, copy=True)
        alpha = np.array(self.alpha, dtype=complex, copy=True)
        if gamma.shape != alpha.shape or gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1]:
            raise DimensionMismatch(f"gamma and alpha must be equal square matrices, got {gamma.shape} and {alpha.shape}.")
        gamma.setflags(write=False)
        alpha.setflags(write=False)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "n", int(gamma.shape[0]))


@dataclass(frozen=True, eq=False)
class DiagonalizationResult:
    transform: BogoliubovTransform
    xi: np.ndarray
    xi_eigs: np.ndarray
    ground_energy: float
    ground_state: QuasiFreeState
    offdiag_residual: float


@dataclass(frozen=True)
class TransformCheck:
    """Residuals of the symplectic identities and slacks of the norm bounds for one transform."""
    residual_symp_left: float
    residual_symp_right: float
    residual_UU: float
    residual_UUdag: float
    residual_UtV: float
    max_residual: float
    norm_V_full: float
    hs_V: float
    norm_bound: float
    hs_bound: float
    slack_norm: float
    slack_hs: float


# ─── Small constructors ─────────────────────────────────────────────────────

def identity_transform(n: int) -> BogoliubovTransform:
    return BogoliubovTransform(U=np.eye(n), V=np.zeros((n, n)))


def from_full(full: np.ndarray) -> BogoliubovTransform:
    """Read (U, V) off a 2n x 2n matrix; the conjugate blocks are rebuilt from them."""
    U, _, V, _ = blocks(np.asarray(full, dtype=complex))
    return BogoliubovTransform(U=U, V=V)


def symplectic_inverse(T: BogoliubovTransform) -> BogoliubovTransform:
    """V^{-1} = S V* S, i.e. blocks (U*, -V^T)."""
    return BogoliubovTransform(U=T.U.conj().T, V=-T.V.T)


def transform_norms(T: BogoliubovTransform) -> Tuple[float, float]:
    """(operator norm of the full transform, HS norm of the V block)."""
    return op_norm(T.full), hs_norm(T.V)


def vacuum_state(n: int) -> QuasiFreeState:
    return QuasiFreeState(gamma=np.zeros((n, n)), alpha=np.zeros((n, n)))


def generalized_density_matrix(s: QuasiFreeState) -> np.ndarray:
    """Gamma = [[gamma, alpha], [alpha*, 1 + conj(gamma)]]."""
    return np.block([[s.gamma, s.alpha], [s.alpha.conj().T, np.eye(s.n) + s.gamma.conj()]])


def check_state(s: QuasiFreeState, tol: Optional[Tolerances] = None) -> None:
    """Raise unless gamma is Hermitian PSD, alpha symmetric and the generalized density matrix PSD."""
    tol = tol or get_tolerances()
    scale = max(max_norm(s.gamma), max_norm(s.alpha))
    tol_sym = tol.sym_tol(scale)
    if max_norm(s.gamma - s.gamma.conj().T) > tol_sym:
        raise NotHermitian("gamma is not Hermitian.", invariant="gamma Hermitian", anchor="one-particle density matrices")
    if symm_defect(s.alpha) > tol_sym:
        raise NotHermitian("alpha is not symmetric.", invariant="alpha = alpha^T", anchor="one-particle density matrices")
    hermitian_eigh(s.gamma, tol_psd=max(tol.tol_psd, tol_sym), name="gamma")
    hermitian_eigh(generalized_density_matrix(s), tol_psd=max(tol.tol_psd, tol_sym), name="generalized density matrix")


# ─── Diagonalization ────────────────────────────────────────────────────────

def diagonalize(Q: QuadraticHamiltonian, tol: Optional[Tolerances] = None) -> DiagonalizationResult:
    """
    Diagonalize the block operator of Q by a Bogoliubov transformation.

    :raises NotDiagonalizable: ||G|| >= 1 - tol_gap.
    :raises DegeneratePairing: the spectrum of B cannot be split into +/- lambda pairs away from zero.
    """
    tol = tol or get_tolerances()
    report = classify(Q, tol)
    if not report.diagonalizable:
        logger.error(f"Instance has ||G|| = {report.norm_G:.6g}; not diagonalizable.")
        raise NotDiagonalizable(
            f"||G|| = {report.norm_G:.6g} is not below 1 - tol_gap.",
            invariant="||G|| < 1",
            anchor="diagonalization of bosonic block operators",
        )

    n = Q.n
    A = build_block_operator(Q, tol).A
    scale = op_norm(A)
    A_half = hermitian_power(A, 0.5, tol_psd=tol.tol_psd, name="A")
    A_ihalf = hermitian_power(A, -0.5, tol_psd=tol.tol_psd, name="A")
    S = symplectic_form(n)
    B = hermitize(A_half @ S @ A_half)

    eigvals, eigvecs = la.eigh(B)
    if np.min(np.abs(eigvals)) < tol.tol_pair * scale:
        logger.error(f"B has an eigenvalue within {tol.tol_pair * scale:.3e} of zero.")
        raise DegeneratePairing("B has a (numerically) zero eigenvalue; ||G|| is too close to 1.",
                                invariant="Ker B = {0}", anchor="diagonalization of bosonic block operators")
    negative, positive = eigvals[:n], eigvals[n:]
    if np.any(negative >= 0) or np.any(positive <= 0):
        raise DegeneratePairing("B does not have n positive and n negative eigenvalues.",
                                invariant="+/- lambda pairs", anchor="diagonalization of bosonic block operators")
    pair_gap = float(np.max(np.abs(np.sort(positive) - np.sort(-negative))))
    if pair_gap > tol.tol_symp * scale:
        raise DegeneratePairing(f"+/- eigenvalues of B do not match (gap {pair_gap:.3e}).",
                                invariant="JBJ = -B", anchor="diagonalization of bosonic block operators")
    logger.debug(f"B eigenvalue pairing gap {pair_gap:.3e}; lambda = {positive}")

    # Partners are built as Jw, never re-extracted, so U_c commutes with J exactly.
    W = eigvecs[:, n:]
    partners = swap_matrix(n) @ W.conj()
    U_c = np.hstack([W, partners]).conj().T
    root = np.sqrt(np.concatenate([positive, positive]))
    full = (root[:, None] * U_c) @ A_ihalf

    T = from_full(full)
    transformed = T.full @ A @ T.full.conj().T
    xi = hermitize(transformed[:n, :n])
    offdiag = float(np.linalg.norm(transformed[:n, n:], "fro"))
    if offdiag > tol.tol_diag * max(1.0, float(np.linalg.norm(A, "fro"))):
        logger.error(f"Off-diagonal block residual {offdiag:.3e} after diagonalization.")
        raise BoundViolated(f"off-diagonal block of V A V* has norm {offdiag:.3e}.",
                            invariant="V A V* block diagonal", anchor="diagonalization of bosonic block operators")

    state, energy = ground_state_data(Q, T, tol)
    xi_eigs = np.sort(np.linalg.eigvalsh(xi))
    logger.info(f"Diagonalized n={n} instance: xi_eigs={xi_eigs}, E0={energy:.12g}, offdiag={offdiag:.2e}")
    return DiagonalizationResult(
        transform=T,
        xi=xi,
        xi_eigs=xi_eigs,
        ground_energy=energy,
        ground_state=state,
        offdiag_residual=offdiag,
    )


def verify_transform(T: BogoliubovTransform, G_norms: Tuple[float, float]) -> TransformCheck:
    """
    Report residuals of V*SV = S, VSV* = S, U*U = 1 + V*V, UU* = 1 + conj(V)V^T, U^T V symmetric,
    the HS norm of V and the slack of ||V|| <= ((1+||G||)/(1-||G||))^{1/4} and
    ||V||_HS <= 2||G||_HS/(1-||G||). Nothing is asserted here.
    """
    n = T.n
    S = symplectic_form(n)
    eye = np.eye(n)
    full, U, V = T.full, T.U, T.V
    left = max_norm(full.conj().T @ S @ full - S)
    right = max_norm(full @ S @ full.conj().T - S)
    uu = max_norm(U.conj().T @ U - eye - V.conj().T @ V)
    uudag = max_norm(U @ U.conj().T - eye - V.conj() @ V.T)
    utv = symm_defect(U.T @ V)

    norm_G, hs_G = G_norms
    norm_full, hs_V = transform_norms(T)
    if norm_G < 1:
        norm_bound = ((1 + norm_G) / (1 - norm_G)) ** 0.25
        hs_bound = 2 * hs_G / (1 - norm_G)
    else:
        norm_bound = hs_bound = math.inf
    return TransformCheck(
        residual_symp_left=left,
        residual_symp_right=right,
        residual_UU=uu,
        residual_UUdag=uudag,
        residual_UtV=utv,
        max_residual=max(left, right, uu, uudag, utv),
        norm_V_full=norm_full,
        hs_V=hs_V,
        norm_bound=norm_bound,
        hs_bound=hs_bound,
        slack_norm=norm_bound - norm_full,
        slack_hs=hs_bound - hs_V,
    )


def ground_state_data(Q: QuadraticHamiltonian, T: BogoliubovTransform,
                      tol: Optional[Tolerances] = None) -> Tuple[QuasiFreeState, float]:
    """
    Density matrices and energy of the vacuum of the quasiparticles defined by T:
    gamma0 = V*V, alpha0 = U* conj(V) (symmetrized), E0 = Tr(h gamma0) + Re Tr(k* alpha0).

    :raises BlockInconsistency: alpha0 is not symmetric, so T is not a Bogoliubov transformation.
    :raises BoundViolated: E0 lies below -1/2 ||k h^{-1/2}||_HS^2.
    """
    tol = tol or get_tolerances()
    if T.n != Q.n:
        raise DimensionMismatch(f"transform has n={T.n}, instance has n={Q.n}.")
    gamma = hermitize(T.V.conj().T @ T.V)
    alpha_raw = T.U.conj().T @ T.V.conj()
    defect = symm_defect(alpha_raw)
    if defect > tol.tol_symp * max(1.0, max_norm(alpha_raw)):
        raise BlockInconsistency(f"alpha0 symmetry defect {defect:.3e}.",
                                 invariant="U^T V symmetric", anchor="compatibility conditions")
    state = QuasiFreeState(gamma=gamma, alpha=symmetrize(alpha_raw))
    energy = state_energy(Q, state)

    bound = classify(Q, tol).lower_bound
    if energy < bound - tol.tol_num * max(1.0, abs(bound)):
        logger.error(f"Ground energy {energy:.12g} below the lower bound {bound:.12g}.")
        raise BoundViolated(f"ground energy {energy:.12g} < {bound:.12g}.",
                            invariant="E0 >= -1/2 ||k h^-1/2||_HS^2", anchor="diagonalization of quadratic Hamiltonians")
    return state, energy


def transform_state(T: BogoliubovTransform, s: QuasiFreeState, direction: str = "forward",
                    tol: Optional[Tolerances] = None) -> QuasiFreeState:
    """
    Transport a state by congruence of its generalized density matrix.

    forward: Gamma' = V* Gamma V (quasiparticle frame -> particle frame; the vacuum goes to the ground state).
    inverse: Gamma' = V^{-*} Gamma V^{-1} with V^{-1} = S V* S, the exact inverse of forward.
    """
    tol = tol or get_tolerances()
    if T.n != s.n:
        raise DimensionMismatch(f"transform has n={T.n}, state has n={s.n}.")
    if direction == "forward":
        M = T.full
    elif direction == "inverse":
        M = symplectic_inverse(T).full
    else:
        raise ValueError(f"Unknown direction {direction!r}; expected 'forward' or 'inverse'.")

    gdm = M.conj().T @ generalized_density_matrix(s) @ M
    g11, g12, g21, g22 = blocks(gdm)
    n = s.n
    scale = max(1.0, max_norm(gdm))
    defect = max(max_norm(g21 - g12.conj().T), max_norm(g22 - np.eye(n) - g11.conj()))
    if defect > tol.tol_num * scale:
        logger.error(f"Transported density matrix violates the block structure by {defect:.3e}.")
        raise BlockInconsistency(f"generalized density matrix blocks inconsistent (defect {defect:.3e}).",
                                 invariant="Gamma = [[g, a], [a*, 1 + conj(g)]]", anchor="density matrix transformation")
    return QuasiFreeState(gamma=hermitize(g11), alpha=symmetrize(g12))
