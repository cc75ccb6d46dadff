# bogodiag/cli/commands/evolve.py
import logging
from typing import Tuple

import numpy as np

from ...config import RuntimeSettings, Tolerances
from ...core.diagonalizer import QuasiFreeState, vacuum_state
from ...core.dynamics import ConstantDrive, DynamicsProblem, Trajectory, evolve, oracle_evolve
from ...core.errors import InvalidParameter
from ...core.fock_oracle import build_fock_space, fock_vacuum
from ...models.payloads import ProblemFile, TrajectoryFile
from ...models.run_config import RunConfig
from ..io import load_instance, load_model, write_csv, write_json

logger = logging.getLogger(__name__)

HEADER = ("t", "norm_X", "norm_Y", "herm_defect", "symm_defect", "tr_gamma", "energy")
DEFAULT_DT = 1e-3
DEFAULT_HORIZON = 1.0


def load_problem(config: RunConfig, tol: Tolerances) -> Tuple[DynamicsProblem, QuasiFreeState]:
    """Problem from --problem, or a constant quench K = k from --input/--preset starting in the vacuum."""
    if config.problem is not None:
        payload = load_model(config.problem, ProblemFile)
        problem = payload.to_problem(T=config.horizon, dt=config.dt)
        if payload.initial_state is not None:
            return problem, payload.initial_state.to_state()
        return problem, vacuum_state(problem.n)
    Q, _ = load_instance(config, tol)
    problem = DynamicsProblem(
        drive=ConstantDrive(h=np.array(Q.h), k2=np.array(Q.k)),
        T=config.horizon or DEFAULT_HORIZON,
        dt=config.dt or DEFAULT_DT,
    )
    return problem, vacuum_state(Q.n)


def run_trajectory(config: RunConfig, tol: Tolerances, settings: RuntimeSettings) -> Tuple[DynamicsProblem, Trajectory]:
    problem, s0 = load_problem(config, tol)
    if config.engine == "rk4":
        return problem, evolve(problem, s0, tol)
    if np.any(s0.gamma) or np.any(s0.alpha):
        raise InvalidParameter("the fock engine starts from the vacuum only.", invariant="vacuum initial state")
    F = build_fock_space(problem.n, config.cutoff, dim_max=settings.dim_max)
    return problem, oracle_evolve(problem, F, fock_vacuum(F), tol)


def run(config: RunConfig, tol: Tolerances, settings: RuntimeSettings) -> int:
    _, traj = run_trajectory(config, tol, settings)
    rows = [
        (m.t, m.norm_X, m.norm_Y, m.herm_defect, m.symm_defect, m.tr_gamma, m.energy)
        for m in traj.monitors
    ]
    write_csv(HEADER, rows, config.output)
    if config.matrices is not None:
        write_json(TrajectoryFile.from_trajectory(traj), config.matrices)
    return 0
