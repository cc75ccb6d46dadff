# bogodiag/core/quadratic_model.py
"""
Problem data for bosonic quadratic Hamiltonians

    H = sum_ij h_ij a*_i a_j + 1/2 sum_ij (k_ij a*_i a*_j + conj(k_ij) a_i a_j)

with h Hermitian positive definite and k complex symmetric, together with the
2n x 2n block operator A = [[h, k], [conj(k), conj(h)]] of its Weyl form
H_A = 1/2 b* A b, b = (a_1..a_n, a*_1..a*_n), and the condition operator G.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Protocol

import numpy as np

from ..common.utils import (
    conj_swap,
    ensure_finite,
    herm_defect,
    hermitian_eigh,
    hermitian_power,
    hermitize,
    hs_norm,
    max_norm,
    op_norm,
    symmetrize,
)
from ..config import Tolerances, get_tolerances
from .errors import (
    DimensionMismatch,
    IllConditioned,
    InvalidParameter,
    NotHermitian,
    NotPositiveDefinite,
)

logger = logging.getLogger(__name__)


def _frozen(mat: np.ndarray) -> np.ndarray:
    arr = np.array(mat, dtype=complex, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class QuadraticHamiltonian:
    """The pair (h, k): one-body energies and the symmetric pairing matrix."""
    h: np.ndarray
    k: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "h", _frozen(self.h))
        object.__setattr__(self, "k", _frozen(self.k))
        object.__setattr__(self, "n", int(self.h.shape[0]))


@dataclass(frozen=True, eq=False)
class BlockOperator:
    n: int
    A: np.ndarray


@dataclass(frozen=True)
class ConditionReport:
    norm_G: float
    hs_G: float
    hs_kh_half: float
    lower_bound: float
    diagonalizable: bool
    implementable: bool
    bounded_below: bool


class HasDensityMatrices(Protocol):
    gamma: np.ndarray
    alpha: np.ndarray


# ─── Construction and validation ────────────────────────────────────────────

def validate_hamiltonian(h_raw, k_raw, tol: Optional[Tolerances] = None) -> QuadraticHamiltonian:
    """
    Validate raw (h, k) data and return the normalized instance.

    h is Hermitized when its defect is within tolerance, k is always replaced by its
    symmetric part (the antisymmetric part drops out of the a*a* and aa terms).

    :raises DimensionMismatch: non-square or differently sized inputs.
    :raises NotHermitian: h defect above tolerance.
    :raises NotPositiveDefinite: smallest eigenvalue of h is not positive.
    """
    tol = tol or get_tolerances()
    h_arr = np.asarray(h_raw, dtype=complex)
    k_arr = np.asarray(k_raw, dtype=complex)

    if h_arr.ndim != 2 or h_arr.shape[0] != h_arr.shape[1] or h_arr.shape[0] < 1:
        raise DimensionMismatch(f"h must be a non-empty square matrix, got shape {h_arr.shape}.",
                                invariant="square h", anchor="quadratic Hamiltonian data")
    if k_arr.shape != h_arr.shape:
        raise DimensionMismatch(f"k has shape {k_arr.shape}, expected {h_arr.shape}.",
                                invariant="equal sizes", anchor="quadratic Hamiltonian data")
    if not (ensure_finite(h_arr) and ensure_finite(k_arr)):
        raise InvalidParameter("h and k must have finite entries.", invariant="finite entries")

    defect = herm_defect(h_arr)
    tol_sym = tol.sym_tol(max_norm(h_arr))
    if defect > tol_sym:
        logger.error(f"h Hermiticity defect {defect:.3e} exceeds {tol_sym:.3e}.")
        raise NotHermitian(f"h is not Hermitian (defect {defect:.3e} > {tol_sym:.3e}).",
                           invariant="h Hermitian", anchor="one-body operator h > 0")
    h = hermitize(h_arr)
    k = symmetrize(k_arr)

    min_eig = float(np.linalg.eigvalsh(h)[0])
    if min_eig <= 0:
        logger.error(f"h has non-positive eigenvalue {min_eig:.6g}.")
        raise NotPositiveDefinite(f"h is not positive definite (smallest eigenvalue {min_eig:.6g}).",
                                  invariant="h > 0", anchor="one-body operator h > 0")

    logger.debug(f"Validated instance with n={h.shape[0]}, min eig(h)={min_eig:.6g}.")
    return QuadraticHamiltonian(h=h, k=k)


def build_block_operator(Q: QuadraticHamiltonian, tol: Optional[Tolerances] = None) -> BlockOperator:
    """Assemble A = [[h, k], [conj(k), conj(h)]] and check it is Hermitian and invariant under the conjugate swap."""
    tol = tol or get_tolerances()
    A = np.block([[Q.h, Q.k], [Q.k.conj(), Q.h.conj()]])
    tol_sym = tol.sym_tol(max_norm(A))
    if herm_defect(A) > tol_sym:
        raise NotHermitian("block operator is not Hermitian.", invariant="A Hermitian", anchor="block operator")
    if max_norm(conj_swap(A) - A) > tol_sym:
        raise NotHermitian("block operator is not invariant under the conjugate swap.",
                           invariant="JAJ = A", anchor="block operator")
    return BlockOperator(n=Q.n, A=_frozen(A))


def _h_inverse_sqrt(Q: QuadraticHamiltonian, tol: Tolerances) -> np.ndarray:
    eigvals, _ = hermitian_eigh(Q.h, tol_psd=tol.tol_psd, name="h")
    cond = float(eigvals[-1] / eigvals[0]) if eigvals[0] > 0 else math.inf
    if cond > tol.cond_max:
        logger.error(f"Condition number of h is {cond:.3e} (> {tol.cond_max:.1e}).")
        raise IllConditioned(f"h is ill-conditioned (condition number {cond:.3e}).",
                             invariant="cond(h) <= cond_max", anchor="condition operator G")
    return hermitian_power(Q.h, -0.5, tol_psd=tol.tol_psd, name="h")


def compute_G(Q: QuadraticHamiltonian, tol: Optional[Tolerances] = None) -> np.ndarray:
    """G = h^{-1/2} k conj(h)^{-1/2}; its operator and HS norms are basis independent."""
    tol = tol or get_tolerances()
    h_isqrt = _h_inverse_sqrt(Q, tol)
    return h_isqrt @ Q.k @ h_isqrt.conj()


def classify(Q: QuadraticHamiltonian, tol: Optional[Tolerances] = None) -> ConditionReport:
    """
    Compute the diagonalization and implementability scalars of an instance.

    diagonalizable iff ||G|| < 1 - tol_gap; bounded_below iff ||G|| <= 1 + tol_gap, the
    hypothesis of the lower bound -1/2 Tr(k h^-1 k*).
    """
    tol = tol or get_tolerances()
    h_isqrt = _h_inverse_sqrt(Q, tol)
    G = h_isqrt @ Q.k @ h_isqrt.conj()
    norm_G = op_norm(G)
    hs_G = hs_norm(G)
    kh_half = h_isqrt @ Q.k
    hs_kh_half = hs_norm(kh_half)
    lower_bound = -0.5 * float(np.real(np.trace(kh_half.conj().T @ kh_half)))
    report = ConditionReport(
        norm_G=norm_G,
        hs_G=hs_G,
        hs_kh_half=hs_kh_half,
        lower_bound=min(lower_bound, 0.0),
        diagonalizable=norm_G < 1.0 - tol.tol_gap,
        implementable=math.isfinite(hs_G),
        bounded_below=norm_G <= 1.0 + tol.tol_gap,
    )
    logger.debug(f"classify: ||G||={norm_G:.6g}, ||G||_HS={hs_G:.6g}, lower_bound={report.lower_bound:.6g}")
    return report


# ─── Presets and instance generators ────────────────────────────────────────

def bogoliubov_1947_pair(p: float, rho: float, vhat: float, tol: Optional[Tolerances] = None) -> QuadraticHamiltonian:
    """
    Two-mode (p, -p) sector of the weakly interacting Bose gas in its quadratic approximation.

    :param p: momentum magnitude, non-zero.
    :param rho: density N/V, positive.
    :param vhat: Fourier coefficient of the interaction at p, non-negative.
    :returns: h = (p^2 + rho*vhat) I_2, k = rho*vhat [[0, 1], [1, 0]].
    """
    if p == 0 or not math.isfinite(p):
        raise InvalidParameter("momentum p must be non-zero and finite.", invariant="p != 0", anchor="pair Hamiltonian")
    if not rho > 0:
        raise InvalidParameter("density rho must be positive.", invariant="rho > 0", anchor="pair Hamiltonian")
    if not vhat >= 0:
        raise InvalidParameter("interaction coefficient vhat must be non-negative.",
                               invariant="vhat >= 0", anchor="pair Hamiltonian")
    coupling = rho * vhat
    energy = p * p + coupling
    h = energy * np.eye(2)
    k = coupling * np.array([[0.0, 1.0], [1.0, 0.0]])
    logger.info(f"Built pair instance p={p}, rho*vhat={coupling}.")
    return validate_hamiltonian(h, k, tol)


def rotate(Q: QuadraticHamiltonian, W: np.ndarray, tol: Optional[Tolerances] = None) -> QuadraticHamiltonian:
    """Apply the mode rotation a' = W a, i.e. (h, k) -> (W h W*, W k W^T)."""
    W = np.asarray(W, dtype=complex)
    return validate_hamiltonian(W @ Q.h @ W.conj().T, W @ Q.k @ W.T, tol)


def random_hamiltonian(
    rng: np.random.Generator,
    n: int,
    norm_G_max: float = 0.8,
    commuting: bool = False,
    tol: Optional[Tolerances] = None,
) -> QuadraticHamiltonian:
    """
    Draw a valid random instance with ||G|| <= norm_G_max.

    commuting=True gives real diagonal h and k with |k_i| <= norm_G_max * h_i.
    """
    if n < 1:
        raise InvalidParameter("mode count must be at least 1.", invariant="n >= 1")
    if commuting:
        h_diag = rng.uniform(0.5, 2.0, size=n)
        k_diag = rng.uniform(-norm_G_max, norm_G_max, size=n) * h_diag
        return validate_hamiltonian(np.diag(h_diag), np.diag(k_diag), tol)

    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = hermitize(x @ x.conj().T) / n + 0.5 * np.eye(n)
    y = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    k = symmetrize(y)
    Q = validate_hamiltonian(h, k, tol)
    target = rng.uniform(0.05, 1.0) * norm_G_max
    scale = target / op_norm(compute_G(Q, tol))
    return validate_hamiltonian(Q.h, Q.k * scale, tol)


# ─── Energies of states ─────────────────────────────────────────────────────

def state_energy(Q: QuadraticHamiltonian, state: HasDensityMatrices) -> float:
    """<H> = Tr(h^{1/2} gamma h^{1/2}) + Re Tr(k* alpha) for a state with density matrices (gamma, alpha)."""
    kinetic = float(np.real(np.trace(Q.h @ state.gamma)))
    pairing = float(np.real(np.trace(Q.k.conj().T @ state.alpha)))
    return kinetic + pairing


@dataclass(frozen=True)
class SandwichProbe:
    delta: float
    trace_term: float
    samples: int
    min_slack_lower_bound: float
    min_slack_upper_printed: float
    min_slack_lower_printed: float
    min_slack_lower_variant: float
    violations_lower_printed: int
    violations_lower_variant: int


def sandwich_probe(Q: QuadraticHamiltonian, states: Iterable[HasDensityMatrices],
                   tol: Optional[Tolerances] = None) -> SandwichProbe:
    """
    Evaluate the two-sided comparison of H with dGamma(h) on the supplied states, without asserting.

    With delta = ||G||^2 and T = Tr(k h^-1 k*), the slacks reported are those of
      <H> >= -T/2,
      (1 + sqrt(delta)) dGamma(h) + sqrt(delta) T / 2 >= <H>,
      <H> >= (1 + sqrt(delta)) dGamma(h) - sqrt(delta) T / 2   (as printed),
      <H> >= (1 - sqrt(delta)) dGamma(h) - sqrt(delta) T / 2   (variant).
    """
    tol = tol or get_tolerances()
    report = classify(Q, tol)
    delta = report.norm_G ** 2
    root = math.sqrt(delta)
    trace_term = -2.0 * report.lower_bound

    slacks: List[tuple] = []
    for state in states:
        energy = state_energy(Q, state)
        free = float(np.real(np.trace(Q.h @ state.gamma)))
        slacks.append((
            energy + 0.5 * trace_term,
            (1 + root) * free + 0.5 * root * trace_term - energy,
            energy - ((1 + root) * free - 0.5 * root * trace_term),
            energy - ((1 - root) * free - 0.5 * root * trace_term),
        ))
    if not slacks:
        raise InvalidParameter("sandwich probe needs at least one state.", invariant="non-empty sample")

    columns = np.array(slacks)
    mins = columns.min(axis=0)
    probe = SandwichProbe(
        delta=delta,
        trace_term=trace_term,
        samples=len(slacks),
        min_slack_lower_bound=float(mins[0]),
        min_slack_upper_printed=float(mins[1]),
        min_slack_lower_printed=float(mins[2]),
        min_slack_lower_variant=float(mins[3]),
        violations_lower_printed=int(np.sum(columns[:, 2] < -tol.tol_num)),
        violations_lower_variant=int(np.sum(columns[:, 3] < -tol.tol_num)),
    )
    logger.info(f"Sandwich probe over {probe.samples} states: printed lower bound violated "
                f"{probe.violations_lower_printed} times, variant {probe.violations_lower_variant} times.")
    return probe
