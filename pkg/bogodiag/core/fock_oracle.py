# bogodiag/core/fock_oracle.py
"""
Brute-force truncated Fock space used as ground truth for the other modules.

The basis holds all occupation vectors with total number <= n_max in graded lexicographic order
(by total number, then descending in the first mode). Ladder matrices are stored sparse; the
Hamiltonians built from them are dense.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, Iterator, Optional, Tuple

import numpy as np
from scipy import linalg as la
from scipy.sparse import csr_matrix, identity

from ..common.utils import hermitize
from ..config import get_settings
from .diagonalizer import QuasiFreeState
from .errors import CutoffTooTight, DimensionMismatch, DimensionOverflow, InvalidParameter, NotNormalized
from .quadratic_model import QuadraticHamiltonian

logger = logging.getLogger(__name__)

NORM_TOL = 1e-12
EDGE_WEIGHT_TOL = 1e-12


# ─── Types ──────────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class TruncatedFock:
    n_modes: int
    n_max: int
    basis: Tuple[Tuple[int, ...], ...]
    index: Dict[Tuple[int, ...], int]
    ladder: Tuple[csr_matrix, ...]
    totals: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True, eq=False)
class DenseOperator:
    space: TruncatedFock
    matrix: np.ndarray

    def expectation(self, psi: np.ndarray) -> complex:
        return complex(np.vdot(psi, self.matrix @ psi))


# ─── Space construction ─────────────────────────────────────────────────────

def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def fock_dimension(n_modes: int, n_max: int) -> int:
    """Number of occupation vectors with total number <= n_max."""
    return math.comb(n_max + n_modes, n_modes)


def _enumerate_space(n_modes: int, n_max: int) -> TruncatedFock:
    basis = tuple(occ for total in range(n_max + 1) for occ in _compositions(total, n_modes))
    index = {occ: i for i, occ in enumerate(basis)}
    dim = len(basis)

    ladder = []
    for mode in range(n_modes):
        rows, cols, vals = [], [], []
        for col, occ in enumerate(basis):
            if occ[mode] == 0:
                continue
            lowered = occ[:mode] + (occ[mode] - 1,) + occ[mode + 1:]
            rows.append(index[lowered])
            cols.append(col)
            vals.append(math.sqrt(occ[mode]))
        ladder.append(csr_matrix((np.array(vals, dtype=complex), (rows, cols)), shape=(dim, dim)))

    return TruncatedFock(
        n_modes=n_modes,
        n_max=n_max,
        basis=basis,
        index=index,
        ladder=tuple(ladder),
        totals=np.array([sum(occ) for occ in basis]),
    )


@lru_cache(maxsize=8)
def _extended_space(n_modes: int, n_max: int) -> TruncatedFock:
    return _enumerate_space(n_modes, n_max)


def build_fock_space(n_modes: int, n_max: int, dim_max: Optional[int] = None) -> TruncatedFock:
    """
    Enumerate the truncated space and its annihilation matrices.

    :raises InvalidParameter: n_modes < 1 or n_max < 2.
    :raises DimensionOverflow: the space would exceed dim_max (default from BOGODIAG_DIM_MAX).
    """
    if n_modes < 1:
        raise InvalidParameter("at least one mode is required.", invariant="n_modes >= 1", anchor="truncated Fock space")
    if n_max < 2:
        raise InvalidParameter("cutoff must be at least 2.", invariant="n_max >= 2", anchor="truncated Fock space")
    dim_max = dim_max or get_settings().dim_max
    dim = fock_dimension(n_modes, n_max)
    if dim > dim_max:
        logger.error(f"Fock space with {n_modes} modes and cutoff {n_max} has dimension {dim} > {dim_max}.")
        raise DimensionOverflow(f"Fock dimension {dim} exceeds dim_max = {dim_max}.",
                                invariant="dim <= dim_max", anchor="truncated Fock space")
    F = _enumerate_space(n_modes, n_max)
    logger.debug(f"Built Fock space: {n_modes} modes, cutoff {n_max}, dim {F.dim}.")
    return F


def creation(F: TruncatedFock, mode: int) -> csr_matrix:
    """Truncated creation operator, the exact adjoint of the truncated annihilator."""
    return F.ladder[mode].conj().T.tocsr()


def fock_vacuum(F: TruncatedFock) -> np.ndarray:
    psi = np.zeros(F.dim, dtype=complex)
    psi[0] = 1.0
    return psi


def fock_state(F: TruncatedFock, occupation) -> np.ndarray:
    occupation = tuple(int(m) for m in occupation)
    if occupation not in F.index:
        raise InvalidParameter(f"occupation {occupation} is not in the truncated basis.")
    psi = np.zeros(F.dim, dtype=complex)
    psi[F.index[occupation]] = 1.0
    return psi


def number_operator(F: TruncatedFock) -> DenseOperator:
    return DenseOperator(space=F, matrix=np.diag(F.totals.astype(complex)))


def ccr_defect(F: TruncatedFock, guard: int = 2) -> float:
    """
    Largest entry of [a_i, a*_j] - delta_ij and [a_i, a_j] on states with total number <= n_max - guard.

    Above the guard the truncation makes [a, a*] differ from the identity on the top level.
    """
    interior = np.flatnonzero(F.totals <= F.n_max - guard)
    eye = identity(F.dim, dtype=complex, format="csr")
    worst = 0.0
    for i, j in product(range(F.n_modes), repeat=2):
        a_i, a_j = F.ladder[i], F.ladder[j]
        ad_j = creation(F, j)
        mixed = a_i @ ad_j - ad_j @ a_i
        if i == j:
            mixed = mixed - eye
        pure = a_i @ a_j - a_j @ a_i
        for comm in (mixed, pure):
            block = comm[:, interior].toarray()
            if block.size:
                worst = max(worst, float(np.max(np.abs(block))))
    return worst


# ─── Hamiltonians ───────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class QuadraticTerms:
    """Sparse a*_i a_j and a*_i a*_j on a fixed space; H is linear in (h, k) over these."""
    space: TruncatedFock
    hopping: Tuple[Tuple[csr_matrix, ...], ...]
    pairing: Tuple[Tuple[csr_matrix, ...], ...]

    def combine(self, h: np.ndarray, k: np.ndarray) -> csr_matrix:
        n = self.space.n_modes
        H = csr_matrix((self.space.dim, self.space.dim), dtype=complex)
        for i, j in product(range(n), repeat=2):
            if h[i, j] != 0:
                H = H + h[i, j] * self.hopping[i][j]
            if k[i, j] != 0:
                create_pair = self.pairing[i][j]
                H = H + 0.5 * k[i, j] * create_pair + 0.5 * np.conj(k[i, j]) * create_pair.conj().T
        return H.tocsr()


def quadratic_terms(F: TruncatedFock) -> QuadraticTerms:
    ann = F.ladder
    cre = [creation(F, i) for i in range(F.n_modes)]
    modes = range(F.n_modes)
    return QuadraticTerms(
        space=F,
        hopping=tuple(tuple((cre[i] @ ann[j]).tocsr() for j in modes) for i in modes),
        pairing=tuple(tuple((cre[i] @ cre[j]).tocsr() for j in modes) for i in modes),
    )


def _normal_ordered(Q: QuadraticHamiltonian, F: TruncatedFock) -> csr_matrix:
    return quadratic_terms(F).combine(Q.h, Q.k)


def _weyl(Q: QuadraticHamiltonian, F: TruncatedFock, dim_max: Optional[int] = None):
    """1/2 sum_IJ A_IJ b*_I b_J with b = (a, a*), built one level higher so that a a* is exact on F."""
    n = Q.n
    dim_max = dim_max or get_settings().dim_max
    ext_dim = fock_dimension(F.n_modes, F.n_max + 1)
    if ext_dim > dim_max:
        logger.error(f"Weyl assembly needs cutoff {F.n_max + 1} with dimension {ext_dim} > {dim_max}.")
        raise DimensionOverflow(f"Weyl form needs a scratch space of dimension {ext_dim}, above dim_max = {dim_max}.",
                                invariant="dim <= dim_max", anchor="truncated Fock space")
    ext = _extended_space(F.n_modes, F.n_max + 1)
    A = np.block([[Q.h, Q.k], [Q.k.conj(), Q.h.conj()]])
    gen = list(ext.ladder) + [creation(ext, i) for i in range(n)]
    gen_dag = [creation(ext, i) for i in range(n)] + list(ext.ladder)
    H = csr_matrix((ext.dim, ext.dim), dtype=complex)
    for I, J in product(range(2 * n), repeat=2):
        if A[I, J] != 0:
            H = H + 0.5 * A[I, J] * (gen_dag[I] @ gen[J])
    return H[:F.dim, :F.dim]


def assemble(Q: QuadraticHamiltonian, F: TruncatedFock, form: str = "normal_ordered",
             dim_max: Optional[int] = None) -> DenseOperator:
    """
    Dense matrix of H on the truncated space.

    normal_ordered: sum h_ij a*_i a_j + 1/2 sum (k_ij a*_i a*_j + conj(k_ij) a_i a_j).
    weyl: the symmetric-ordered form; equals normal_ordered + Tr(h)/2 entrywise.

    :raises DimensionOverflow: weyl only; the scratch space one level above the cutoff exceeds dim_max.
    """
    if Q.n != F.n_modes:
        raise DimensionMismatch(f"instance has {Q.n} modes, Fock space has {F.n_modes}.",
                                invariant="n == n_modes", anchor="truncated Fock space")
    if form == "normal_ordered":
        H = _normal_ordered(Q, F)
    elif form == "weyl":
        H = _weyl(Q, F, dim_max)
    else:
        raise InvalidParameter(f"unknown form {form!r}; expected 'normal_ordered' or 'weyl'.")
    return DenseOperator(space=F, matrix=H.toarray())


def exact_spectrum(H: DenseOperator, count: int) -> np.ndarray:
    """Lowest `count` eigenvalues, ascending."""
    count = max(1, min(count, H.space.dim))
    return la.eigh(hermitize(H.matrix), eigvals_only=True, subset_by_index=[0, count - 1])


def ground_state(H: DenseOperator) -> Tuple[float, np.ndarray]:
    eigvals, eigvecs = la.eigh(hermitize(H.matrix), subset_by_index=[0, 0])
    return float(eigvals[0]), eigvecs[:, 0]


# ─── States ─────────────────────────────────────────────────────────────────

def _check_normalized(psi: np.ndarray, F: TruncatedFock) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.shape[0] != F.dim:
        raise DimensionMismatch(f"state has length {psi.shape[0]}, Fock space has dimension {F.dim}.")
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > NORM_TOL:
        raise NotNormalized(f"state norm is {norm:.15g}.", invariant="||psi|| = 1", anchor="one-particle density matrices")
    return psi


def edge_weight(psi: np.ndarray, F: TruncatedFock, guard: int = 2) -> float:
    """Probability carried by states with total number above n_max - guard."""
    return float(np.sum(np.abs(psi[F.totals > F.n_max - guard]) ** 2))


def state_density_matrices(psi: np.ndarray, F: TruncatedFock) -> QuasiFreeState:
    """gamma_ij = <a*_j a_i>, alpha_ij = <a_i a_j>; returned raw, purity is not assumed."""
    psi = _check_normalized(psi, F)
    lowered = [a @ psi for a in F.ladder]
    n = F.n_modes
    gamma = np.empty((n, n), dtype=complex)
    alpha = np.empty((n, n), dtype=complex)
    for i, j in product(range(n), repeat=2):
        gamma[i, j] = np.vdot(lowered[j], lowered[i])
        alpha[i, j] = np.vdot(psi, F.ladder[i] @ lowered[j])
    return QuasiFreeState(gamma=gamma, alpha=alpha)


def wick_check(psi: np.ndarray, F: TruncatedFock, max_order: int = 4) -> float:
    """
    Largest deviation from Wick's rule: odd moments of order 1 and 3 must vanish and every
    4-point moment <b_I b_J b_K b_L> must equal the sum over its three pairings.

    Moments are split as <(b_J* b_I*) psi, (b_K b_L) psi>, so two ladder applications per side are
    exact once psi has no weight in the top two levels.

    :raises CutoffTooTight: psi has weight above n_max - 2.
    """
    if max_order not in (3, 4):
        raise InvalidParameter(f"max_order must be 3 or 4, got {max_order}.")
    psi = _check_normalized(psi, F)
    weight = edge_weight(psi, F, guard=2)
    if weight > EDGE_WEIGHT_TOL:
        logger.error(f"State has weight {weight:.3e} in the top two levels of the cutoff.")
        raise CutoffTooTight(f"state weight {weight:.3e} within two levels of the cutoff.",
                             invariant="support <= n_max - 2", anchor="Wick's theorem")

    n = F.n_modes
    gen = list(F.ladder) + [creation(F, i) for i in range(n)]
    size = 2 * n

    def dag(I: int) -> int:
        return (I + n) % size

    one = [g @ psi for g in gen]
    two = [[gen[I] @ one[J] for J in range(size)] for I in range(size)]

    deviation = max(abs(np.vdot(psi, one[I])) for I in range(size))
    pair = np.array([[np.vdot(psi, two[I][J]) for J in range(size)] for I in range(size)])
    for I, J, K in product(range(size), repeat=3):
        deviation = max(deviation, abs(np.vdot(one[dag(I)], two[J][K])))

    if max_order == 4:
        for I, J, K, L in product(range(size), repeat=4):
            moment = np.vdot(two[dag(J)][dag(I)], two[K][L])
            pairings = pair[I, J] * pair[K, L] + pair[I, K] * pair[J, L] + pair[I, L] * pair[J, K]
            deviation = max(deviation, abs(moment - pairings))

    logger.debug(f"wick_check over {size} generators: deviation {deviation:.3e}")
    return float(deviation)
