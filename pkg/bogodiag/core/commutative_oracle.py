# bogodiag/core/commutative_oracle.py
"""
Closed-form diagonalization when h and k are real diagonal matrices, used to check the generic path.

Per mode with G_i = k_i / h_i and c_i = sqrt(1 - G_i^2) the transform is s_i [[1, o_i], [o_i, 1]] with
s_i = sqrt(1/2 + 1/(2 c_i)), o_i = -G_i / (1 + c_i), and the excitation energy is xi_i = sqrt(h_i^2 - k_i^2).
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..common.utils import max_norm
from ..config import Tolerances, get_tolerances
from .diagonalizer import BogoliubovTransform, diagonalize, transform_norms
from .errors import DimensionMismatch, InvalidParameter, OutOfRegime
from .quadratic_model import QuadraticHamiltonian, validate_hamiltonian

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CommutativeInstance:
    h_diag: np.ndarray
    k_diag: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        h = np.array(self.h_diag, dtype=float, copy=True).reshape(-1)
        k = np.array(self.k_diag, dtype=float, copy=True).reshape(-1)
        if h.shape != k.shape or h.size == 0:
            raise DimensionMismatch(f"h_diag and k_diag must be non-empty and equally long, got {h.size} and {k.size}.")
        if np.any(h <= 0):
            raise InvalidParameter("h_diag entries must be positive.", invariant="h_i > 0", anchor="commutative example")
        if np.any(np.abs(k) >= h):
            i = int(np.argmax(np.abs(k) / h))
            raise OutOfRegime(f"|k_{i}| = {abs(k[i]):.6g} is not below h_{i} = {h[i]:.6g}.",
                              invariant="|k_i| < h_i", anchor="commutative example")
        h.setflags(write=False)
        k.setflags(write=False)
        object.__setattr__(self, "h_diag", h)
        object.__setattr__(self, "k_diag", k)
        object.__setattr__(self, "n", int(h.size))

    def to_hamiltonian(self, tol: Optional[Tolerances] = None) -> QuadraticHamiltonian:
        return validate_hamiltonian(np.diag(self.h_diag), np.diag(self.k_diag), tol)


@dataclass(frozen=True, eq=False)
class ClosedForm:
    transform: BogoliubovTransform
    xi_diag: np.ndarray
    norm_V: float
    hs_V: float
    ground_energy: float


@dataclass(frozen=True)
class OracleComparison:
    dev_xi: float
    dev_gamma: float
    dev_alpha: float
    dev_energy: float
    dev_norm_V: float
    dev_hs_V: float
    max_deviation: float
    tolerance: float
    norm_G: float
    energy_bracket: Tuple[float, float]
    energy_in_bracket: bool

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance and self.energy_in_bracket


def random_commutative_instance(rng: np.random.Generator, n: int, ratio: float = 0.9) -> CommutativeInstance:
    """Draw h_i in (0.5, 2) and k_i uniform in (-ratio h_i, ratio h_i)."""
    h = rng.uniform(0.5, 2.0, size=n)
    k = rng.uniform(-ratio, ratio, size=n) * h
    return CommutativeInstance(h_diag=h, k_diag=k)


def closed_form_diagonalize(C: CommutativeInstance) -> ClosedForm:
    G = C.k_diag / C.h_diag
    c = np.sqrt(1.0 - G ** 2)
    s = np.sqrt(0.5 + 0.5 / c)
    o = -G / (1.0 + c)
    T = BogoliubovTransform(U=np.diag(s), V=np.diag(s * o))
    xi = np.sqrt(C.h_diag ** 2 - C.k_diag ** 2)
    return ClosedForm(
        transform=T,
        xi_diag=xi,
        norm_V=float(np.max(s * (1.0 + np.abs(o)))),
        hs_V=float(np.sqrt(np.sum((s * o) ** 2))),
        ground_energy=float(0.5 * np.sum(xi - C.h_diag)),
    )


def comparison_tolerance(norm_G: float) -> float:
    """1e-10 up to ||G|| = 0.9, then growing like 1e-12 / (1 - ||G||)."""
    if norm_G <= 0.9:
        return 1e-10
    return max(1e-10, 1e-12 / (1.0 - norm_G))


def oracle_compare(C: CommutativeInstance, tol: Optional[Tolerances] = None) -> OracleComparison:
    """Compare the generic diagonalization against the closed form on gauge-invariant quantities."""
    tol = tol or get_tolerances()
    closed = closed_form_diagonalize(C)
    result = diagonalize(C.to_hamiltonian(tol), tol)

    U, V = closed.transform.U, closed.transform.V
    gamma_closed = V.conj().T @ V
    alpha_closed = U.conj().T @ V.conj()
    norm_full, hs_V = transform_norms(result.transform)

    deviations = dict(
        dev_xi=max_norm(result.xi_eigs - np.sort(closed.xi_diag)),
        dev_gamma=max_norm(result.ground_state.gamma - gamma_closed),
        dev_alpha=max_norm(result.ground_state.alpha - alpha_closed),
        dev_energy=abs(result.ground_energy - closed.ground_energy),
        dev_norm_V=abs(norm_full - closed.norm_V),
        dev_hs_V=abs(hs_V - closed.hs_V),
    )
    norm_G = float(np.max(np.abs(C.k_diag) / C.h_diag))
    weight = float(np.sum(C.k_diag ** 2 / C.h_diag))
    # xi_i - h_i lies in [-k_i^2/h_i, -k_i^2/(2 h_i)] and E0 is half their sum.
    upper, lower = -0.25 * weight, -0.5 * weight
    slack = tol.tol_num * max(1.0, weight)
    in_bracket = lower - slack <= closed.ground_energy <= upper + slack

    comparison = OracleComparison(
        **deviations,
        max_deviation=max(deviations.values()),
        tolerance=comparison_tolerance(norm_G),
        norm_G=norm_G,
        energy_bracket=(lower, upper),
        energy_in_bracket=in_bracket,
    )
    logger.debug(f"oracle_compare n={C.n}: max deviation {comparison.max_deviation:.3e} (tolerance {comparison.tolerance:.1e})")
    return comparison
