# bogodiag/common/utils.py
import logging
from typing import Tuple

import numpy as np
from scipy import linalg as la

from ..core.errors import NotPositiveDefinite

logger = logging.getLogger(__name__)


def max_norm(mat: np.ndarray) -> float:
    """Largest entry modulus."""
    return float(np.max(np.abs(mat))) if mat.size else 0.0


def herm_defect(mat: np.ndarray) -> float:
    return max_norm(mat - mat.conj().T)


def symm_defect(mat: np.ndarray) -> float:
    return max_norm(mat - mat.T)


def hermitize(mat: np.ndarray) -> np.ndarray:
    return 0.5 * (mat + mat.conj().T)


def symmetrize(mat: np.ndarray) -> np.ndarray:
    return 0.5 * (mat + mat.T)


def op_norm(mat: np.ndarray) -> float:
    """Operator (spectral) norm."""
    return float(np.linalg.norm(mat, 2)) if mat.size else 0.0


def hs_norm(mat: np.ndarray) -> float:
    """Hilbert-Schmidt (Frobenius) norm."""
    return float(np.linalg.norm(mat, "fro"))


def hermitian_eigh(mat: np.ndarray, tol_psd: float = 1e-12, name: str = "matrix") -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigendecomposition of a Hermitian PSD matrix with the round-off policy used repo-wide:
    eigenvalues below -tol_psd (scaled by the largest modulus) reject, those in [-tol_psd, 0] clamp to 0.
    """
    eigvals, eigvecs = la.eigh(hermitize(mat))
    scale = max(1.0, float(np.max(np.abs(eigvals)))) if eigvals.size else 1.0
    if eigvals.size and eigvals[0] < -tol_psd * scale:
        logger.error(f"{name} has eigenvalue {eigvals[0]:.3e} below -tol_psd.")
        raise NotPositiveDefinite(
            f"{name} is not positive semi-definite (smallest eigenvalue {eigvals[0]:.6g}).",
            invariant="positive semi-definite",
            anchor="matrix functions via Hermitian eigendecomposition",
        )
    if eigvals.size and eigvals[0] < 0:
        logger.debug(f"Clamping {int(np.sum(eigvals < 0))} slightly negative eigenvalue(s) of {name} to 0.")
        eigvals = np.clip(eigvals, 0.0, None)
    return eigvals, eigvecs


def hermitian_power(mat: np.ndarray, power: float, tol_psd: float = 1e-12, name: str = "matrix") -> np.ndarray:
    """
    Calculate mat**power for a Hermitian PSD matrix using its eigendecomposition,
    S^p = W D^p W^H where S = W D W^H. Negative powers require strictly positive spectrum.
    """
    eigvals, eigvecs = hermitian_eigh(mat, tol_psd=tol_psd, name=name)
    if power < 0 and eigvals.size and eigvals[0] <= 0:
        raise NotPositiveDefinite(
            f"{name} is singular; cannot raise it to the power {power}.",
            invariant="positive definite",
            anchor="matrix functions via Hermitian eigendecomposition",
        )
    powered = np.power(eigvals, power)
    return (eigvecs * powered) @ eigvecs.conj().T


def symplectic_form(n: int) -> np.ndarray:
    """S = diag(I, -I) on the doubled space."""
    return np.diag(np.concatenate([np.ones(n), -np.ones(n)])).astype(complex)


def swap_matrix(n: int) -> np.ndarray:
    """P = [[0, I], [I, 0]]; the conjugate-swap map acts as x -> P conj(x)."""
    eye = np.eye(n)
    zeros = np.zeros((n, n))
    return np.block([[zeros, eye], [eye, zeros]]).astype(complex)


def conj_swap_vector(vec: np.ndarray) -> np.ndarray:
    """Apply the conjugate-swap map to a vector f ⊕ g, giving conj(g) ⊕ conj(f)."""
    n = vec.shape[0] // 2
    return np.concatenate([vec[n:].conj(), vec[:n].conj()])


def conj_swap(mat: np.ndarray) -> np.ndarray:
    """Conjugate a linear map by the conjugate-swap map: M -> P conj(M) P."""
    n = mat.shape[0] // 2
    conj = mat.conj()
    return np.block([[conj[n:, n:], conj[n:, :n]], [conj[:n, n:], conj[:n, :n]]])


def blocks(mat: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Split a 2n x 2n matrix into its four n x n blocks (11, 12, 21, 22)."""
    n = mat.shape[0] // 2
    return mat[:n, :n], mat[:n, n:], mat[n:, :n], mat[n:, n:]


def ensure_finite(mat: np.ndarray) -> bool:
    return bool(np.all(np.isfinite(mat)))
