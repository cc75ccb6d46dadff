# bogodiag/cli/commands/__init__.py
from . import diagonalize, evolve, example, oracle, probe, spectrum, tddiag, verify

COMMANDS = {
    "diagonalize": diagonalize.run,
    "spectrum": spectrum.run,
    "evolve": evolve.run,
    "oracle": oracle.run,
    "verify": verify.run,
    "example": example.run,
    "probe": probe.run,
    "tddiag": tddiag.run,
}
