# bogodiag/cli/commands/diagonalize.py
import logging

from ...config import RuntimeSettings, Tolerances
from ...core.diagonalizer import diagonalize, verify_transform
from ...core.quadratic_model import classify
from ...models.reports import DiagonalizationReport
from ...models.run_config import RunConfig
from ..io import load_instance, write_json

logger = logging.getLogger(__name__)


def run(config: RunConfig, tol: Tolerances, settings: RuntimeSettings) -> int:
    Q, name = load_instance(config, tol)
    condition = classify(Q, tol)
    result = diagonalize(Q, tol)
    check = verify_transform(result.transform, (condition.norm_G, condition.hs_G))
    write_json(DiagonalizationReport.build(result, condition, check, name=name), config.output)
    return 0
