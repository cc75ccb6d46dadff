# bogodiag/cli/main.py
import argparse
import logging
from typing import Dict, List, Optional, Sequence

from pydantic import ValidationError

from common.utils import setup_logging

from ..config import get_settings, get_tolerances
from ..core.errors import BogodiagError, InputError, NumericFailure
from ..models.run_config import RunConfig
from .commands import COMMANDS

logger = logging.getLogger("bogodiag")

EXIT_BAD_INPUT = InputError.exit_code
EXIT_NUMERIC_FAILURE = NumericFailure.exit_code


def _parse_tolerances(pairs: Sequence[str]) -> Dict[str, str]:
    overrides = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"--tol expects NAME=VALUE, got {pair!r}")
        overrides[name.strip()] = value.strip()
    return overrides


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bogodiag",
        description="Diagonalize, evolve and cross-check bosonic quadratic Hamiltonians.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS), help="What to run.")
    parser.add_argument("--input", help="Hamiltonian JSON file {'h': Matrix, 'k': Matrix}.")
    parser.add_argument("--preset", choices=["scalar", "pair"], help="Built-in instance when --input is not given.")
    parser.add_argument("--output", help="Output file (stdout when omitted).")
    parser.add_argument("--problem", help="Dynamics problem JSON file (evolve, tddiag).")
    parser.add_argument("--trajectory", help="Trajectory matrices JSON file written by evolve --matrices (tddiag).")
    parser.add_argument("--matrices", help="evolve: also dump per-sample density matrices to this JSON file.")
    parser.add_argument("--engine", choices=["rk4", "fock"], default="rk4", help="evolve: integrator.")
    parser.add_argument("--cutoff", type=int, default=40, help="Total-number cutoff of the truncated Fock space.")
    parser.add_argument("--dt", type=float, help="Time step.")
    parser.add_argument("--horizon", "-T", type=float, help="Time horizon.")
    parser.add_argument("--count", type=int, help="Levels, random instances or sample states, depending on the command.")
    parser.add_argument("--seed", type=int, help="Seed for randomized commands.")
    parser.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE", help="Tolerance override (repeatable).")
    parser.add_argument("--threads", type=int, help="Cap on parallel instance evaluation.")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR.")
    return parser


def run(config: RunConfig) -> int:
    """Execute one validated invocation; returns the process exit status."""
    setup_logging("bogodiag", config.log_level)
    try:
        tol = get_tolerances().model_copy(update=config.tol)
        settings = get_settings()
        if config.threads is not None:
            settings = settings.model_copy(update={"threads": config.threads})
        logger.info(f"Running '{config.command}'")
        return COMMANDS[config.command](config, tol, settings)
    except BogodiagError as e:
        logger.error(e.describe())
        return e.exit_code
    except ValidationError as e:
        logger.error(f"Invalid input file: {e}")
        return EXIT_BAD_INPUT
    except OSError as e:
        logger.error(f"Cannot read or write a file: {e}")
        return EXIT_BAD_INPUT
    except Exception as e:
        logger.error(f"Unexpected failure in '{config.command}': {e}", exc_info=True)
        return EXIT_NUMERIC_FAILURE


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging("bogodiag", args.log_level)
    try:
        config = RunConfig(
            command=args.command,
            input=args.input,
            preset=args.preset,
            output=args.output,
            problem=args.problem,
            trajectory=args.trajectory,
            matrices=args.matrices,
            engine=args.engine,
            cutoff=args.cutoff,
            dt=args.dt,
            horizon=args.horizon,
            count=args.count,
            seed=args.seed,
            tol=_parse_tolerances(args.tol),
            threads=args.threads,
            log_level=args.log_level,
        )
    except (ValidationError, argparse.ArgumentTypeError) as e:
        logger.error(f"Invalid arguments: {e}")
        return EXIT_BAD_INPUT
    return run(config)
