# bogodiag/core/dynamics.py
"""
Time evolution of quasi-free states under a time-dependent quadratic Hamiltonian.

The Bogoliubov equations for the density matrices, in the coordinates used repo-wide, read

    i d/dt gamma = h gamma - gamma h + K alpha* - alpha K*
    i d/dt alpha = h alpha + alpha h^T + K + K gamma^T + gamma K

and are integrated with fixed-step RK4. `oracle_evolve` propagates the many-body vector in the
truncated Fock space instead, applying one midpoint exponential of the sparse Hamiltonian per step.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Protocol, Sequence, Tuple

import numpy as np
from scipy.sparse.linalg import expm_multiply

from ..common.utils import ensure_finite, herm_defect, hermitize, hs_norm, max_norm, symm_defect, symmetrize
from ..config import Tolerances, get_tolerances
from .diagonalizer import QuasiFreeState, check_state
from .errors import (
    DefectBlowup,
    DimensionMismatch,
    DimensionOverflow,
    InvalidParameter,
    NonFiniteState,
    NormDrift,
    NotHermitian,
)
from .fock_oracle import TruncatedFock, edge_weight, quadratic_terms, state_density_matrices
from .quadratic_model import QuadraticHamiltonian, state_energy

logger = logging.getLogger(__name__)

DEFECT_MAX = 1e-6
NORM_STEP_TOL = 1e-10
ORACLE_DIM_MAX = 2000
GRID_SNAP = 1e-9


# ─── Drives ─────────────────────────────────────────────────────────────────

class Drive(Protocol):
    n: int

    def coefficients(self, t: float) -> Tuple[np.ndarray, np.ndarray]:
        """(h(t), K(t)) at time t."""
        ...


def _as_matrix(value) -> np.ndarray:
    arr = np.array(value, dtype=complex, copy=True)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ConstantDrive:
    h: np.ndarray
    k2: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "h", _as_matrix(self.h))
        object.__setattr__(self, "k2", _as_matrix(self.k2))
        object.__setattr__(self, "n", int(self.h.shape[0]))

    def coefficients(self, t: float) -> Tuple[np.ndarray, np.ndarray]:
        return self.h, self.k2


@dataclass(frozen=True, eq=False)
class SinusoidalDrive:
    """Constant h and K(t) = k2_offset + k2_amplitude * sin(omega t + phase)."""
    h: np.ndarray
    k2_amplitude: np.ndarray
    omega: float = 1.0
    phase: float = 0.0
    k2_offset: Optional[np.ndarray] = None
    n: int = field(init=False)

    def __post_init__(self):
        h = _as_matrix(self.h)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "k2_amplitude", _as_matrix(self.k2_amplitude))
        offset = np.zeros_like(h) if self.k2_offset is None else self.k2_offset
        object.__setattr__(self, "k2_offset", _as_matrix(offset))
        object.__setattr__(self, "n", int(h.shape[0]))

    def coefficients(self, t: float) -> Tuple[np.ndarray, np.ndarray]:
        return self.h, self.k2_offset + self.k2_amplitude * math.sin(self.omega * t + self.phase)


@dataclass(frozen=True, eq=False)
class SampledDrive:
    """h and K given on a time grid, linearly interpolated in between."""
    times: np.ndarray
    h_samples: np.ndarray
    k2_samples: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        times = np.array(self.times, dtype=float, copy=True).reshape(-1)
        h = np.array(self.h_samples, dtype=complex, copy=True)
        k2 = np.array(self.k2_samples, dtype=complex, copy=True)
        if times.size < 2 or np.any(np.diff(times) <= 0):
            raise InvalidParameter("sample times must be strictly increasing with at least two entries.",
                                   invariant="increasing sample grid")
        if h.shape[0] != times.size or k2.shape != h.shape or h.ndim != 3:
            raise DimensionMismatch(f"samples must have shape ({times.size}, n, n), got {h.shape} and {k2.shape}.")
        for arr in (times, h, k2):
            arr.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "h_samples", h)
        object.__setattr__(self, "k2_samples", k2)
        object.__setattr__(self, "n", int(h.shape[1]))

    def coefficients(self, t: float) -> Tuple[np.ndarray, np.ndarray]:
        if t < self.times[0] - 1e-12 or t > self.times[-1] + 1e-12:
            raise InvalidParameter(f"t = {t} outside the sampled window [{self.times[0]}, {self.times[-1]}].")
        j = int(np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, self.times.size - 2))
        w = (t - self.times[j]) / (self.times[j + 1] - self.times[j])
        h = (1 - w) * self.h_samples[j] + w * self.h_samples[j + 1]
        k2 = (1 - w) * self.k2_samples[j] + w * self.k2_samples[j + 1]
        return h, k2


# ─── Problem and trajectory ─────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class DynamicsProblem:
    drive: Drive
    T: float
    dt: float
    n: int = field(init=False)

    def __post_init__(self):
        if not self.dt > 0:
            raise InvalidParameter(f"dt must be positive, got {self.dt}.", invariant="dt > 0")
        if not self.T >= self.dt:
            raise InvalidParameter(f"horizon T = {self.T} is shorter than dt = {self.dt}.", invariant="T >= dt")
        object.__setattr__(self, "n", int(self.drive.n))

    @property
    def steps(self) -> int:
        """Steps needed to reach T; a ratio within rounding of an integer is not padded with a sliver step."""
        ratio = self.T / self.dt
        nearest = round(ratio)
        if abs(ratio - nearest) <= GRID_SNAP * max(1.0, ratio):
            return int(nearest)
        return int(math.ceil(ratio))

    @property
    def times(self) -> np.ndarray:
        """0, dt, 2 dt, ... with the last step shortened so that times[-1] == T exactly."""
        times = self.dt * np.arange(self.steps + 1, dtype=float)
        times[-1] = self.T
        return times

    def coefficients(self, t: float, tol: Optional[Tolerances] = None) -> Tuple[np.ndarray, np.ndarray]:
        """Evaluate (h(t), K(t)) and check their structure."""
        tol = tol or get_tolerances()
        h, k2 = self.drive.coefficients(t)
        if h.shape != (self.n, self.n) or k2.shape != (self.n, self.n):
            raise DimensionMismatch(f"drive returned shapes {h.shape} and {k2.shape} at t = {t}.")
        tol_sym = tol.sym_tol(max(max_norm(h), max_norm(k2)))
        if max_norm(h - h.conj().T) > tol_sym:
            raise NotHermitian(f"h(t) is not Hermitian at t = {t}.", invariant="h(t) Hermitian", anchor="Bogoliubov equations")
        if symm_defect(k2) > tol_sym:
            raise NotHermitian(f"K(t) is not symmetric at t = {t}.", invariant="K(t) symmetric", anchor="Bogoliubov equations")
        return h, k2

    def hamiltonian(self, t: float, tol: Optional[Tolerances] = None) -> QuadraticHamiltonian:
        h, k2 = self.coefficients(t, tol)
        return QuadraticHamiltonian(h=h, k=k2)


@dataclass(frozen=True)
class Monitor:
    t: float
    norm_X: float
    norm_Y: float
    herm_defect: float
    symm_defect: float
    tr_gamma: float
    energy: float


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: Tuple[QuasiFreeState, ...]
    monitors: Tuple[Monitor, ...]

    def gammas(self) -> np.ndarray:
        return np.stack([s.gamma for s in self.states])

    def alphas(self) -> np.ndarray:
        return np.stack([s.alpha for s in self.states])

    def max_impurity(self) -> float:
        return max(m.norm_X + m.norm_Y for m in self.monitors)


# ─── Bogoliubov equations ───────────────────────────────────────────────────

def purity_witnesses(s: QuasiFreeState) -> Tuple[np.ndarray, np.ndarray]:
    """X = gamma + gamma^2 - alpha alpha*, Y = gamma alpha - alpha gamma^T; both vanish iff s is pure quasi-free."""
    gamma, alpha = s.gamma, s.alpha
    X = gamma + gamma @ gamma - alpha @ alpha.conj().T
    Y = gamma @ alpha - alpha @ gamma.T
    return X, Y


def bogoliubov_rhs(h: np.ndarray, k2: np.ndarray, gamma: np.ndarray, alpha: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(d gamma/dt, d alpha/dt)."""
    d_gamma = -1j * (h @ gamma - gamma @ h + k2 @ alpha.conj().T - alpha @ k2.conj().T)
    d_alpha = -1j * (h @ alpha + alpha @ h.T + k2 + k2 @ gamma.T + gamma @ k2)
    return d_gamma, d_alpha


def _monitor(P: DynamicsProblem, t: float, s: QuasiFreeState, herm: float, symm: float,
             tol: Tolerances) -> Monitor:
    X, Y = purity_witnesses(s)
    return Monitor(
        t=float(t),
        norm_X=hs_norm(X),
        norm_Y=hs_norm(Y),
        herm_defect=herm,
        symm_defect=symm,
        tr_gamma=float(np.real(np.trace(s.gamma))),
        energy=state_energy(P.hamiltonian(t, tol), s),
    )


def evolve(P: DynamicsProblem, s0: QuasiFreeState, tol: Optional[Tolerances] = None) -> Trajectory:
    """
    Integrate the Bogoliubov equations with classical RK4 on `P.times`; the last step is shortened
    when T is not a multiple of dt.

    After each step gamma is re-Hermitized and alpha re-symmetrized; the defects before the
    correction go into the monitors.

    :raises DefectBlowup: a pre-correction defect above 1e-6 (dt too large).
    :raises NonFiniteState: NaN or Inf in the state.
    """
    tol = tol or get_tolerances()
    if s0.n != P.n:
        raise DimensionMismatch(f"initial state has n={s0.n}, problem has n={P.n}.")
    check_state(s0, tol)

    times = P.times
    gamma = np.array(s0.gamma, dtype=complex)
    alpha = np.array(s0.alpha, dtype=complex)

    def rhs(t: float, g: np.ndarray, a: np.ndarray):
        h, k2 = P.coefficients(t, tol)
        return bogoliubov_rhs(h, k2, g, a)

    states: List[QuasiFreeState] = [QuasiFreeState(gamma=gamma, alpha=alpha)]
    monitors: List[Monitor] = [_monitor(P, times[0], states[0], herm_defect(gamma), symm_defect(alpha), tol)]
    for t, t_next in zip(times[:-1], times[1:]):
        dt = t_next - t
        k1g, k1a = rhs(t, gamma, alpha)
        k2g, k2a = rhs(t + dt / 2, gamma + dt / 2 * k1g, alpha + dt / 2 * k1a)
        k3g, k3a = rhs(t + dt / 2, gamma + dt / 2 * k2g, alpha + dt / 2 * k2a)
        k4g, k4a = rhs(t_next, gamma + dt * k3g, alpha + dt * k3a)
        gamma = gamma + dt / 6 * (k1g + 2 * k2g + 2 * k3g + k4g)
        alpha = alpha + dt / 6 * (k1a + 2 * k2a + 2 * k3a + k4a)

        if not (ensure_finite(gamma) and ensure_finite(alpha)):
            logger.error(f"Non-finite state at t = {t_next:.6g}.")
            raise NonFiniteState(f"state became non-finite at t = {t_next:.6g}.",
                                 invariant="finite state", anchor="Bogoliubov equations")
        herm = herm_defect(gamma)
        symm = symm_defect(alpha)
        if max(herm, symm) > DEFECT_MAX:
            logger.error(f"Structure defect {max(herm, symm):.3e} at t = {t_next:.6g} exceeds {DEFECT_MAX}.")
            raise DefectBlowup(f"structure defect {max(herm, symm):.3e} before correction; reduce dt.",
                               invariant="gamma Hermitian, alpha symmetric", anchor="Bogoliubov equations")
        gamma = hermitize(gamma)
        alpha = symmetrize(alpha)
        state = QuasiFreeState(gamma=gamma, alpha=alpha)
        states.append(state)
        monitors.append(_monitor(P, t_next, state, herm, symm, tol))

    traj = Trajectory(times=times, states=tuple(states), monitors=tuple(monitors))
    logger.info(f"evolve: {P.steps} RK4 steps of dt={P.dt:g}; max ||X||+||Y|| = {traj.max_impurity():.3e}")
    return traj


# ─── Fock-space propagation ─────────────────────────────────────────────────

def oracle_evolve(P: DynamicsProblem, F: TruncatedFock, psi0: np.ndarray,
                  tol: Optional[Tolerances] = None) -> Trajectory:
    """
    Propagate psi with psi(t + dt) = exp(-i dt H(t + dt/2)) psi(t) and read off (gamma, alpha) per step.

    H stays sparse and only its action on psi is exponentiated, so no dim x dim propagator is formed.

    :raises DimensionOverflow: Fock dimension above 2000.
    :raises NormDrift: a step changes ||psi|| by more than 1e-10.
    """
    tol = tol or get_tolerances()
    if F.n_modes != P.n:
        raise DimensionMismatch(f"Fock space has {F.n_modes} modes, problem has n={P.n}.")
    if F.dim > ORACLE_DIM_MAX:
        raise DimensionOverflow(f"Fock dimension {F.dim} exceeds {ORACLE_DIM_MAX} for Fock propagation.",
                                invariant="dim <= 2000", anchor="Bogoliubov equation in Fock space")

    terms = quadratic_terms(F)
    constant = isinstance(P.drive, ConstantDrive)
    H = None
    psi = np.asarray(psi0, dtype=complex).copy()
    times = P.times

    def record(t: float, vec: np.ndarray) -> Tuple[QuasiFreeState, Monitor]:
        s = state_density_matrices(vec, F)
        return s, _monitor(P, t, s, herm_defect(s.gamma), symm_defect(s.alpha), tol)

    first_state, first_monitor = record(times[0], psi)
    states, monitors = [first_state], [first_monitor]
    for t, t_next in zip(times[:-1], times[1:]):
        dt = t_next - t
        if H is None or not constant:
            h, k2 = P.coefficients(t + dt / 2, tol)
            H = terms.combine(h, k2)
        before = np.linalg.norm(psi)
        psi = expm_multiply(-1j * dt * H, psi)
        drift = abs(np.linalg.norm(psi) - before)
        if drift > NORM_STEP_TOL:
            logger.error(f"Norm drift {drift:.3e} in one step at t = {t:.6g}.")
            raise NormDrift(f"norm changed by {drift:.3e} in one step.", invariant="unitary step",
                            anchor="Bogoliubov equation in Fock space")
        psi = psi / np.linalg.norm(psi)
        s, m = record(t_next, psi)
        states.append(s)
        monitors.append(m)

    weight = edge_weight(psi, F, guard=2)
    if weight > 1e-10:
        logger.warning(f"oracle_evolve: final state has weight {weight:.3e} near the cutoff; increase n_max.")
    logger.info(f"oracle_evolve: {P.steps} Magnus steps on dim {F.dim}.")
    return Trajectory(times=times, states=tuple(states), monitors=tuple(monitors))


def observed_order(errors: Sequence[float], ratio: float = 2.0) -> np.ndarray:
    """log(e_i / e_{i+1}) / log(ratio) for errors measured at step sizes shrinking by `ratio`."""
    errs = np.asarray(errors, dtype=float)
    return np.log(errs[:-1] / errs[1:]) / math.log(ratio)
