# bogodiag/models/reports.py
import math
from dataclasses import asdict
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field

from ..core.commutative_oracle import OracleComparison
from ..core.diagonalizer import DiagonalizationResult, TransformCheck
from ..core.quadratic_model import ConditionReport, SandwichProbe
from .payloads import MatrixPayload


def _finite(value: float) -> Optional[float]:
    """JSON has no infinity; unbounded quantities are reported as null."""
    return float(value) if math.isfinite(value) else None


# ─── Condition and diagonalization ──────────────────────────────────────────

class ConditionReportModel(BaseModel):
    norm_G: float
    hs_G: float
    hs_kh_half: float
    lower_bound: float
    diagonalizable: bool
    implementable: bool
    bounded_below: bool

    @classmethod
    def from_report(cls, report: ConditionReport) -> "ConditionReportModel":
        return cls(**asdict(report))


class TransformCheckModel(BaseModel):
    residual_symp_left: float
    residual_symp_right: float
    residual_UU: float
    residual_UUdag: float
    residual_UtV: float
    max_residual: float
    norm_V_full: float
    hs_V: float = Field(..., description="Hilbert-Schmidt norm of the V block (Shale quantity).")
    norm_bound: Optional[float] = None
    hs_bound: Optional[float] = None
    slack_norm: Optional[float] = None
    slack_hs: Optional[float] = None

    @classmethod
    def from_check(cls, check: TransformCheck) -> "TransformCheckModel":
        values = asdict(check)
        for name in ("norm_bound", "hs_bound", "slack_norm", "slack_hs"):
            values[name] = _finite(values[name])
        return cls(**values)


class DiagonalizationReport(BaseModel):
    name: Optional[str] = None
    n: int
    U: MatrixPayload
    V: MatrixPayload
    xi: MatrixPayload
    xi_eigs: List[float]
    ground_energy: float
    offdiag_residual: float
    gamma0: MatrixPayload
    alpha0: MatrixPayload
    condition: ConditionReportModel
    residuals: TransformCheckModel

    @classmethod
    def build(cls, result: DiagonalizationResult, condition: ConditionReport, check: TransformCheck,
              name: Optional[str] = None) -> "DiagonalizationReport":
        T = result.transform
        return cls(
            name=name,
            n=T.n,
            U=MatrixPayload.from_array(T.U),
            V=MatrixPayload.from_array(T.V),
            xi=MatrixPayload.from_array(result.xi),
            xi_eigs=[float(x) for x in result.xi_eigs],
            ground_energy=result.ground_energy,
            offdiag_residual=result.offdiag_residual,
            gamma0=MatrixPayload.from_array(result.ground_state.gamma),
            alpha0=MatrixPayload.from_array(result.ground_state.alpha),
            condition=ConditionReportModel.from_report(condition),
            residuals=TransformCheckModel.from_check(check),
        )


# ─── Oracles ────────────────────────────────────────────────────────────────

class OracleReport(BaseModel):
    """Fock-space checks of one instance."""
    n_modes: int
    cutoff: int
    dim: int
    ccr_interior_defect: float
    weyl_identity_defect: float = Field(..., description="max |H_weyl - H_normal - Tr(h)/2|.")
    ground_energy_oracle: float
    ground_energy_predicted: Optional[float] = None
    edge_weight: float = Field(..., description="Ground-state weight within two levels of the cutoff.")
    wick_deviation: float
    gamma_oracle: MatrixPayload
    alpha_oracle: MatrixPayload
    density_deviation: Optional[float] = Field(None, description="Deviation from the diagonalizer's (gamma0, alpha0).")
    norm_X: float
    norm_Y: float


class ComparisonReport(BaseModel):
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
    passed: bool

    @classmethod
    def from_comparison(cls, comparison: OracleComparison) -> "ComparisonReport":
        return cls(**asdict(comparison), passed=comparison.passed)


class ExampleReport(BaseModel):
    seed: int
    count: int
    instances: List[ComparisonReport]
    worst_deviation: float
    all_passed: bool


class SandwichProbeReport(BaseModel):
    delta: float = Field(..., description="||G||^2.")
    trace_term: float = Field(..., description="Tr(k h^-1 k*).")
    samples: int
    min_slack_lower_bound: float
    min_slack_upper_printed: float
    min_slack_lower_printed: float
    min_slack_lower_variant: float
    violations_lower_printed: int
    violations_lower_variant: int
    seed: Optional[int] = None

    @classmethod
    def from_probe(cls, probe: SandwichProbe, seed: Optional[int] = None) -> "SandwichProbeReport":
        return cls(**asdict(probe), seed=seed)


# ─── Verification ───────────────────────────────────────────────────────────

class CheckResult(BaseModel):
    suite: str
    name: str
    value: float
    threshold: float
    passed: bool


class VerifyReport(BaseModel):
    instances: int
    checks: List[CheckResult]
    failures: int
    passed: bool
