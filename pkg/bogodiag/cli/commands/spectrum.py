# bogodiag/cli/commands/spectrum.py
import logging
from itertools import product
from typing import List

import numpy as np

from ...config import RuntimeSettings, Tolerances
from ...core.diagonalizer import diagonalize
from ...core.fock_oracle import assemble, build_fock_space, exact_spectrum
from ...models.run_config import RunConfig
from ..io import load_instance, write_csv

logger = logging.getLogger(__name__)

HEADER = ("level", "energy", "predicted", "abs_error")


def predicted_levels(ground_energy: float, xi_eigs: np.ndarray, count: int) -> List[float]:
    """Lowest `count` values of E0 + sum_i m_i xi_i over occupations m_i >= 0."""
    levels = [
        ground_energy + float(np.dot(occ, xi_eigs))
        for occ in product(range(count), repeat=len(xi_eigs))
        if sum(occ) < count
    ]
    return sorted(levels)[:count]


def run(config: RunConfig, tol: Tolerances, settings: RuntimeSettings) -> int:
    Q, _ = load_instance(config, tol)
    count = config.count or 3
    result = diagonalize(Q, tol)
    F = build_fock_space(Q.n, config.cutoff, dim_max=settings.dim_max)
    energies = exact_spectrum(assemble(Q, F, "normal_ordered"), count)
    predicted = predicted_levels(result.ground_energy, result.xi_eigs, count)
    rows = [
        (level, float(energy), float(pred), float(abs(energy - pred)))
        for level, (energy, pred) in enumerate(zip(energies, predicted))
    ]
    logger.info(f"spectrum: largest level error {max(r[3] for r in rows):.3e} at cutoff {config.cutoff}")
    write_csv(HEADER, rows, config.output)
    return 0
