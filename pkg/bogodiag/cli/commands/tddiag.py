# bogodiag/cli/commands/tddiag.py
import logging

from ...config import RuntimeSettings, Tolerances
from ...core.tddiag import tddiag_residual
from ...models.payloads import TrajectoryFile
from ...models.run_config import RunConfig
from ..io import load_model, write_csv
from .evolve import load_problem, run_trajectory

logger = logging.getLogger(__name__)

HEADER = ("t", "gamma_residual", "alpha_residual")


def run(config: RunConfig, tol: Tolerances, settings: RuntimeSettings) -> int:
    """Residual CSV for a stored trajectory, or for a fresh RK4 trajectory of the problem."""
    if config.trajectory is not None:
        problem, _ = load_problem(config, tol)
        traj = load_model(config.trajectory, TrajectoryFile).to_trajectory()
    else:
        problem, traj = run_trajectory(config, tol, settings)
    residual = tddiag_residual(traj, problem, tol)
    rows = zip(
        (float(t) for t in residual.times),
        (float(r) for r in residual.gamma_residual),
        (float(r) for r in residual.alpha_residual),
    )
    write_csv(HEADER, rows, config.output)
    return 0
