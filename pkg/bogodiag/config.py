# bogodiag/config.py
import logging
import os
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, Field

from common.utils import parse_positive_int

# --------- Load environment variables ---------
load_dotenv()

logger = logging.getLogger(__name__)


class Tolerances(BaseModel):
    """Numerical tolerances shared by every stage of the pipeline."""
    tol_sym_rel: float = Field(1e-10, description="Hermiticity/symmetry defect allowed, relative to the matrix max-norm.")
    tol_gap: float = Field(1e-9, description="Diagonalizable iff ||G|| < 1 - tol_gap.")
    cond_max: float = Field(1e12, description="Largest accepted condition number of h.")
    tol_psd: float = Field(1e-12, description="Computed eigenvalues in [-tol_psd, 0] are clamped to 0, below are rejected.")
    tol_pair: float = Field(1e-10, description="Eigenvalues of B within tol_pair*||A|| of zero mean the +/- pairing failed.")
    tol_symp: float = Field(1e-8, description="Relative tolerance on symplectic identities.")
    tol_diag: float = Field(1e-8, description="Relative tolerance on the off-diagonal block after diagonalization.")
    tol_num: float = Field(1e-9, description="Absolute tolerance on unit-scale derived quantities.")
    purity_tol: float = Field(1e-8, description="Bound on ||X||_F + ||Y||_F for a state to count as pure quasi-free.")

    model_config = {
        "frozen": True,
        "extra": "forbid",
    }

    def sym_tol(self, scale: float) -> float:
        """Absolute symmetry tolerance for a matrix of max-norm `scale`."""
        return self.tol_sym_rel * max(1.0, scale)


class RuntimeSettings(BaseModel):
    """Process-level knobs read from the environment."""
    threads: int = Field(1, description="Cap on internal parallelism for instance batches.")
    log_level: str = Field("INFO", description="Root log level for the CLI.")
    dim_max: int = Field(5000, description="Largest dense truncated Fock dimension accepted.")

    model_config = {
        "frozen": True,
    }


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return float(raw)
    except ValueError:
        logger.warning(f"Ignoring non-numeric value {raw!r} for {name}; using {default}.")
        return default


@lru_cache(maxsize=1)
def get_tolerances() -> Tolerances:
    """Process-wide tolerances; every field can be overridden by BOGODIAG_<FIELD> (upper case)."""
    defaults = Tolerances()
    overrides = {
        name: _env_float(f"BOGODIAG_{name.upper()}", value)
        for name, value in defaults.model_dump().items()
    }
    return Tolerances(**overrides)


@lru_cache(maxsize=1)
def get_settings() -> RuntimeSettings:
    """Runtime settings from BOGODIAG_THREADS, BOGODIAG_LOG_LEVEL and BOGODIAG_DIM_MAX."""
    return RuntimeSettings(
        threads=parse_positive_int(os.getenv("BOGODIAG_THREADS"), 1),
        log_level=os.getenv("BOGODIAG_LOG_LEVEL", "INFO").upper(),
        dim_max=parse_positive_int(os.getenv("BOGODIAG_DIM_MAX"), 5000),
    )
