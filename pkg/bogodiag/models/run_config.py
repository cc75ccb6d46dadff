# bogodiag/models/run_config.py
from pathlib import Path
from typing import Dict, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from ..config import Tolerances

Command = Literal["diagonalize", "spectrum", "evolve", "oracle", "verify", "example", "probe", "tddiag"]


class RunConfig(BaseModel):
    """One CLI invocation, validated before any numerics run."""
    command: Command
    input: Optional[Path] = Field(None, description="Hamiltonian JSON file {'h': Matrix, 'k': Matrix}.")
    preset: Optional[Literal["scalar", "pair"]] = Field(None, description="Built-in instance used when no input is given.")
    output: Optional[Path] = Field(None, description="Output file; stdout when omitted.")
    problem: Optional[Path] = Field(None, description="Dynamics problem JSON file.")
    trajectory: Optional[Path] = Field(None, description="Trajectory matrices JSON file (tddiag input).")
    matrices: Optional[Path] = Field(None, description="Where evolve dumps per-sample density matrices as JSON.")
    engine: Literal["rk4", "fock"] = Field("rk4", description="evolve: Bogoliubov equations or Fock-space propagation.")
    cutoff: int = Field(40, ge=2, description="Total-number cutoff of the truncated Fock space.")
    dt: Optional[float] = Field(None, gt=0, description="Time step; overrides the problem file.")
    horizon: Optional[float] = Field(None, gt=0, description="Time horizon T; overrides the problem file.")
    count: Optional[int] = Field(None, ge=0, description="Levels (spectrum), random instances (verify, example) or sample states (probe).")
    seed: Optional[int] = Field(None, ge=0, description="Seed for every randomized command.")
    tol: Dict[str, float] = Field(default_factory=dict, description="Tolerance overrides by field name.")
    threads: Optional[int] = Field(None, ge=1, description="Cap on internal parallelism; overrides BOGODIAG_THREADS.")
    log_level: Optional[str] = None

    model_config = {
        "extra": "forbid",
    }

    @field_validator("tol")
    @classmethod
    def check_tolerance_names(cls, tol: Dict[str, float]) -> Dict[str, float]:
        unknown = sorted(set(tol) - set(Tolerances.model_fields))
        if unknown:
            raise ValueError(f"unknown tolerance(s): {', '.join(unknown)}")
        bad = [name for name, value in tol.items() if not value > 0]
        if bad:
            raise ValueError(f"tolerances must be positive: {', '.join(bad)}")
        return tol

    @model_validator(mode="after")
    def check_files_exist(self):
        for name in ("input", "problem", "trajectory"):
            path = getattr(self, name)
            if path is not None and not path.is_file():
                raise ValueError(f"--{name} file {path} does not exist")
        return self
