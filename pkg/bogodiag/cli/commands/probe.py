# bogodiag/cli/commands/probe.py
import logging

import numpy as np

from ...config import RuntimeSettings, Tolerances
from ...core.diagonalizer import diagonalize, vacuum_state
from ...core.quadratic_model import classify, sandwich_probe
from ...core.tddiag import random_pure_state
from ...models.reports import SandwichProbeReport
from ...models.run_config import RunConfig
from ..io import load_instance, write_json
from .common import require_seed

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 100


def run(config: RunConfig, tol: Tolerances, settings: RuntimeSettings) -> int:
    """Report the slacks of the two-sided comparison with dGamma(h) on random pure states; never fails on them."""
    Q, _ = load_instance(config, tol)
    seed = require_seed(config)
    rng = np.random.default_rng(seed)
    count = DEFAULT_SAMPLES if config.count is None else config.count

    states = [vacuum_state(Q.n)]
    if classify(Q, tol).diagonalizable:
        states.append(diagonalize(Q, tol).ground_state)
    states.extend(random_pure_state(rng, Q.n, scale=rng.uniform(0.01, 1.5)) for _ in range(count))

    probe = sandwich_probe(Q, states, tol)
    write_json(SandwichProbeReport.from_probe(probe, seed=seed), config.output)
    return 0
