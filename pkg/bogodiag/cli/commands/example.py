# bogodiag/cli/commands/example.py
import logging
from typing import List

import numpy as np

from ...config import RuntimeSettings, Tolerances
from ...core.commutative_oracle import CommutativeInstance, oracle_compare, random_commutative_instance
from ...core.errors import InvalidParameter
from ...models.reports import ComparisonReport, ExampleReport
from ...models.run_config import RunConfig
from ..io import load_instance, write_json
from .common import map_instances, require_seed

logger = logging.getLogger(__name__)

MAX_MODES = 8


def _instances(config: RunConfig, tol: Tolerances) -> List[CommutativeInstance]:
    if not config.count:
        if config.input is None and config.preset is None:
            return [CommutativeInstance(h_diag=[1.0], k_diag=[0.6])]
        Q, _ = load_instance(config, tol)
        off_diagonal = np.abs(Q.h - np.diag(np.diag(Q.h))).max() + np.abs(Q.k - np.diag(np.diag(Q.k))).max()
        if off_diagonal > 0 or np.any(np.diag(Q.k).imag != 0):
            raise InvalidParameter("example needs real diagonal h and k.", invariant="commuting real instance")
        return [CommutativeInstance(h_diag=np.diag(Q.h).real, k_diag=np.diag(Q.k).real)]
    rng = np.random.default_rng(require_seed(config))
    return [random_commutative_instance(rng, int(rng.integers(1, MAX_MODES + 1))) for _ in range(config.count)]


def run(config: RunConfig, tol: Tolerances, settings: RuntimeSettings) -> int:
    """Compare the generic diagonalization with the closed form; exit 1 if any instance disagrees."""
    instances = _instances(config, tol)
    comparisons = map_instances(lambda C: oracle_compare(C, tol), instances, settings.threads)
    reports = [ComparisonReport.from_comparison(c) for c in comparisons]
    report = ExampleReport(
        seed=config.seed or 0,
        count=len(reports),
        instances=reports,
        worst_deviation=max(r.max_deviation for r in reports),
        all_passed=all(r.passed for r in reports),
    )
    write_json(report, config.output)
    if not report.all_passed:
        logger.error(f"example: {sum(not r.passed for r in reports)} of {len(reports)} instances disagree with the closed form.")
        return 1
    return 0
