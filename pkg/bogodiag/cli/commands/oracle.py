# bogodiag/cli/commands/oracle.py
import logging

import numpy as np

from ...common.utils import hs_norm, max_norm
from ...config import RuntimeSettings, Tolerances
from ...core.diagonalizer import diagonalize
from ...core.dynamics import purity_witnesses
from ...core.fock_oracle import (
    assemble,
    build_fock_space,
    ccr_defect,
    edge_weight,
    ground_state,
    state_density_matrices,
    wick_check,
)
from ...core.quadratic_model import classify
from ...models.payloads import MatrixPayload
from ...models.reports import OracleReport
from ...models.run_config import RunConfig
from ..io import load_instance, write_json

logger = logging.getLogger(__name__)


def run(config: RunConfig, tol: Tolerances, settings: RuntimeSettings) -> int:
    Q, _ = load_instance(config, tol)
    F = build_fock_space(Q.n, config.cutoff, dim_max=settings.dim_max)
    normal = assemble(Q, F, "normal_ordered")
    weyl = assemble(Q, F, "weyl")
    shift = 0.5 * float(np.real(np.trace(Q.h)))
    weyl_defect = max_norm(weyl.matrix - normal.matrix - shift * np.eye(F.dim))

    energy, psi = ground_state(normal)
    state = state_density_matrices(psi, F)
    X, Y = purity_witnesses(state)

    predicted = deviation = None
    if classify(Q, tol).diagonalizable:
        result = diagonalize(Q, tol)
        predicted = result.ground_energy
        deviation = max(max_norm(state.gamma - result.ground_state.gamma),
                        max_norm(state.alpha - result.ground_state.alpha))

    report = OracleReport(
        n_modes=Q.n,
        cutoff=config.cutoff,
        dim=F.dim,
        ccr_interior_defect=ccr_defect(F),
        weyl_identity_defect=weyl_defect,
        ground_energy_oracle=energy,
        ground_energy_predicted=predicted,
        edge_weight=edge_weight(psi, F),
        wick_deviation=wick_check(psi, F),
        gamma_oracle=MatrixPayload.from_array(state.gamma),
        alpha_oracle=MatrixPayload.from_array(state.alpha),
        density_deviation=deviation,
        norm_X=hs_norm(X),
        norm_Y=hs_norm(Y),
    )
    write_json(report, config.output)
    return 0
