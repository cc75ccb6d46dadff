# bogodiag/cli/commands/verify.py
import logging
from typing import List

import numpy as np
from scipy.stats import unitary_group

from ...common.utils import hs_norm, max_norm
from ...config import RuntimeSettings, Tolerances
from ...core.diagonalizer import diagonalize, transform_state, vacuum_state, verify_transform
from ...core.dynamics import purity_witnesses
from ...core.quadratic_model import QuadraticHamiltonian, classify, random_hamiltonian, rotate
from ...core.tddiag import state_to_transform
from ...models.reports import CheckResult, VerifyReport
from ...models.run_config import RunConfig
from ..io import load_instance, write_json
from .common import map_instances, require_seed

logger = logging.getLogger(__name__)

MAX_RANDOM_MODES = 6
RANDOM_NORM_G = 0.8


def _check(suite: str, name: str, value: float, threshold: float, lower: bool = False) -> CheckResult:
    """value <= threshold, or value >= threshold when `lower`."""
    passed = value >= threshold if lower else value <= threshold
    return CheckResult(suite=suite, name=name, value=float(value), threshold=float(threshold), passed=bool(passed))


def check_instance(Q: QuadraticHamiltonian, W: np.ndarray, tol: Tolerances) -> List[CheckResult]:
    """Every invariant suite on one instance; W is the unitary used for the basis-change check."""
    condition = classify(Q, tol)
    result = diagonalize(Q, tol)
    T = result.transform
    check = verify_transform(T, (condition.norm_G, condition.hs_G))
    scale = max(1.0, check.norm_V_full ** 2)
    ground = result.ground_state
    X, Y = purity_witnesses(ground)
    A_fro = hs_norm(np.block([[Q.h, Q.k], [Q.k.conj(), Q.h.conj()]]))
    xi_scale = max(1.0, float(np.max(result.xi_eigs)))

    rotated = diagonalize(rotate(Q, W, tol), tol)
    round_trip = transform_state(T, transform_state(T, ground, "forward", tol), "inverse", tol)
    vacuum_image = transform_state(T, vacuum_state(Q.n), "forward", tol)
    rebuilt = transform_state(state_to_transform(ground, tol=tol), vacuum_state(Q.n), "forward", tol)
    trace_formula = 0.5 * float(np.sum(result.xi_eigs) - np.real(np.trace(Q.h)))

    return [
        _check("transform", "symplectic_residual", check.max_residual, tol.tol_symp * scale),
        _check("transform", "norm_bound_slack", check.slack_norm, -tol.tol_num, lower=True),
        _check("transform", "hs_bound_slack", check.slack_hs, -tol.tol_num, lower=True),
        _check("diagonal", "offdiag_residual", result.offdiag_residual, tol.tol_diag * max(1.0, A_fro)),
        _check("diagonal", "rotation_invariance", max_norm(rotated.xi_eigs - result.xi_eigs), tol.tol_symp * xi_scale),
        _check("ground_state", "purity_X", hs_norm(X), tol.purity_tol * scale),
        _check("ground_state", "purity_Y", hs_norm(Y), tol.purity_tol * scale),
        _check("ground_state", "energy_above_bound", result.ground_energy - condition.lower_bound, -tol.tol_num, lower=True),
        _check("ground_state", "energy_trace_formula", abs(result.ground_energy - trace_formula), tol.tol_symp * xi_scale * Q.n),
        _check("transport", "round_trip", max(max_norm(round_trip.gamma - ground.gamma),
                                              max_norm(round_trip.alpha - ground.alpha)), tol.tol_symp * scale),
        _check("transport", "vacuum_to_ground", max(max_norm(vacuum_image.gamma - ground.gamma),
                                                    max_norm(vacuum_image.alpha - ground.alpha)), tol.tol_num * scale),
        _check("tddiag", "state_completion", max(max_norm(rebuilt.gamma - ground.gamma),
                                                 max_norm(rebuilt.alpha - ground.alpha)), tol.tol_symp * scale),
    ]


def run(config: RunConfig, tol: Tolerances, settings: RuntimeSettings) -> int:
    """Run every invariant suite on the given instance and on --count seeded random ones; exit 1 on any failure."""
    instances: List[QuadraticHamiltonian] = []
    if config.input is not None or config.preset is not None:
        instances.append(load_instance(config, tol)[0])
    rng = np.random.default_rng(require_seed(config) if config.count else (config.seed or 0))
    for _ in range(config.count or 0):
        n = int(rng.integers(1, MAX_RANDOM_MODES + 1))
        instances.append(random_hamiltonian(rng, n, norm_G_max=RANDOM_NORM_G, tol=tol))
    if not instances:
        instances.append(load_instance(config, tol)[0])

    rotations = [unitary_group.rvs(Q.n, random_state=rng) if Q.n > 1 else np.exp(1j * rng.uniform(0, 2 * np.pi)) * np.eye(1)
                 for Q in instances]
    per_instance = map_instances(lambda pair: check_instance(pair[0], pair[1], tol), zip(instances, rotations), settings.threads)
    checks = [c for group in per_instance for c in group]
    failures = sum(not c.passed for c in checks)
    write_json(VerifyReport(instances=len(instances), checks=checks, failures=failures, passed=failures == 0), config.output)
    if failures:
        for c in checks:
            if not c.passed:
                logger.error(f"verify: {c.suite}/{c.name} = {c.value:.3e} violates threshold {c.threshold:.3e}")
        return 1
    return 0
