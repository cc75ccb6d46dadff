# bogodiag/models/payloads.py
from typing import List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from ..core.diagonalizer import QuasiFreeState
from ..core.dynamics import ConstantDrive, DynamicsProblem, SampledDrive, SinusoidalDrive, Trajectory
from ..core.quadratic_model import QuadraticHamiltonian

# An entry is either a real number or a [re, im] pair.
Entry = Union[float, List[float]]


# ─── Matrices ───────────────────────────────────────────────────────────────

class MatrixPayload(BaseModel):
    """Row-major complex matrix: {"rows": r, "cols": c, "data": [[re, im], ...]}."""
    rows: int = Field(..., ge=1, description="Number of rows.")
    cols: int = Field(..., ge=1, description="Number of columns.")
    data: List[Entry] = Field(..., description="Row-major entries, each a real number or a [re, im] pair.")

    model_config = {
        "extra": "forbid",
    }

    @field_validator("data")
    @classmethod
    def check_entries(cls, data: List[Entry]) -> List[List[float]]:
        pairs = []
        for entry in data:
            if isinstance(entry, list):
                if len(entry) != 2:
                    raise ValueError(f"complex entries must be [re, im] pairs, got {entry}")
                pair = [float(entry[0]), float(entry[1])]
            else:
                pair = [float(entry), 0.0]
            if not all(np.isfinite(pair)):
                raise ValueError("matrix entries must be finite")
            pairs.append(pair)
        return pairs

    @model_validator(mode="after")
    def check_size(self):
        if len(self.data) != self.rows * self.cols:
            raise ValueError(f"expected {self.rows * self.cols} entries for a {self.rows}x{self.cols} matrix, got {len(self.data)}")
        return self

    def to_array(self) -> np.ndarray:
        flat = np.array(self.data, dtype=float)
        return (flat[:, 0] + 1j * flat[:, 1]).reshape(self.rows, self.cols)

    @classmethod
    def from_array(cls, mat) -> "MatrixPayload":
        arr = np.atleast_2d(np.asarray(mat, dtype=complex))
        flat = arr.reshape(-1)
        return cls(rows=arr.shape[0], cols=arr.shape[1],
                   data=[[float(z.real), float(z.imag)] for z in flat])


# ─── Instances and states ───────────────────────────────────────────────────

class HamiltonianFile(BaseModel):
    """Instance file: {"h": Matrix, "k": Matrix}."""
    h: MatrixPayload
    k: MatrixPayload
    name: Optional[str] = Field(None, description="Free-form label carried into reports.")

    model_config = {
        "extra": "forbid",
    }

    @classmethod
    def from_hamiltonian(cls, Q: QuadraticHamiltonian, name: Optional[str] = None) -> "HamiltonianFile":
        return cls(h=MatrixPayload.from_array(Q.h), k=MatrixPayload.from_array(Q.k), name=name)


class StateFile(BaseModel):
    gamma: MatrixPayload
    alpha: MatrixPayload

    model_config = {
        "extra": "forbid",
    }

    def to_state(self) -> QuasiFreeState:
        return QuasiFreeState(gamma=self.gamma.to_array(), alpha=self.alpha.to_array())

    @classmethod
    def from_state(cls, s: QuasiFreeState) -> "StateFile":
        return cls(gamma=MatrixPayload.from_array(s.gamma), alpha=MatrixPayload.from_array(s.alpha))


# ─── Dynamics ───────────────────────────────────────────────────────────────

class ProblemFile(BaseModel):
    """
    Dynamics problem. `drive` selects how h(t) and K(t) are given:
    constant uses h and k2; sinusoidal uses h, k2_amplitude, omega, phase and optional k2_offset;
    sampled uses times, h_samples and k2_samples with linear interpolation.
    """
    drive: Literal["constant", "sinusoidal", "sampled"] = "constant"
    T: float = Field(..., gt=0, description="Horizon.")
    dt: float = Field(1e-3, gt=0, description="Step size.")
    h: Optional[MatrixPayload] = None
    k2: Optional[MatrixPayload] = None
    k2_amplitude: Optional[MatrixPayload] = None
    k2_offset: Optional[MatrixPayload] = None
    omega: float = 1.0
    phase: float = 0.0
    times: Optional[List[float]] = None
    h_samples: Optional[List[MatrixPayload]] = None
    k2_samples: Optional[List[MatrixPayload]] = None
    initial_state: Optional[StateFile] = Field(None, description="Initial state; the vacuum when omitted.")

    model_config = {
        "extra": "forbid",
    }

    @model_validator(mode="after")
    def check_drive_fields(self):
        needed = {
            "constant": ("h", "k2"),
            "sinusoidal": ("h", "k2_amplitude"),
            "sampled": ("times", "h_samples", "k2_samples"),
        }[self.drive]
        missing = [name for name in needed if getattr(self, name) is None]
        if missing:
            raise ValueError(f"drive '{self.drive}' requires {', '.join(missing)}")
        return self

    def to_problem(self, T: Optional[float] = None, dt: Optional[float] = None) -> DynamicsProblem:
        if self.drive == "constant":
            drive = ConstantDrive(h=self.h.to_array(), k2=self.k2.to_array())
        elif self.drive == "sinusoidal":
            offset = self.k2_offset.to_array() if self.k2_offset is not None else None
            drive = SinusoidalDrive(h=self.h.to_array(), k2_amplitude=self.k2_amplitude.to_array(),
                                    omega=self.omega, phase=self.phase, k2_offset=offset)
        else:
            drive = SampledDrive(
                times=np.array(self.times),
                h_samples=np.stack([m.to_array() for m in self.h_samples]),
                k2_samples=np.stack([m.to_array() for m in self.k2_samples]),
            )
        return DynamicsProblem(drive=drive, T=T or self.T, dt=dt or self.dt)


class TrajectoryFile(BaseModel):
    """Per-sample density matrices of a trajectory."""
    times: List[float]
    states: List[StateFile]

    model_config = {
        "extra": "forbid",
    }

    @model_validator(mode="after")
    def check_lengths(self):
        if len(self.times) != len(self.states):
            raise ValueError(f"{len(self.times)} times but {len(self.states)} states")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("times must be strictly increasing")
        return self

    @classmethod
    def from_trajectory(cls, traj: Trajectory) -> "TrajectoryFile":
        return cls(times=[float(t) for t in traj.times], states=[StateFile.from_state(s) for s in traj.states])

    def to_trajectory(self) -> Trajectory:
        """Monitors are not stored in the file; the rebuilt trajectory carries none."""
        return Trajectory(times=np.array(self.times), states=tuple(s.to_state() for s in self.states), monitors=())
