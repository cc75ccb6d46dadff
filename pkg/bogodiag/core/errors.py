# bogodiag/core/errors.py
from typing import Optional


class BogodiagError(Exception):
    """Base class for every domain error raised by the library."""
    exit_code: int = 3

    def __init__(self, message: str, invariant: Optional[str] = None, anchor: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.invariant = invariant or type(self).__name__
        self.anchor = anchor

    def describe(self) -> str:
        """One-line description naming the violated invariant and where it comes from."""
        where = f" [{self.anchor}]" if self.anchor else ""
        return f"{self.invariant}: {self.message}{where}"


# ─── Bad input (exit code 2) ────────────────────────────────────────────────

class InputError(BogodiagError, ValueError):
    exit_code = 2


class DimensionMismatch(InputError):
    pass


class NotHermitian(InputError):
    pass


class NotPositiveDefinite(InputError):
    pass


class InvalidParameter(InputError):
    pass


class OutOfRegime(InputError):
    pass


class NotDiagonalizable(InputError):
    pass


class DimensionOverflow(InputError):
    pass


class NotNormalized(InputError):
    pass


class CutoffTooTight(InputError):
    pass


class NotPure(InputError):
    pass


# ─── Numeric failures (exit code 3) ────────────────────────────────────────

class NumericFailure(BogodiagError, ArithmeticError):
    exit_code = 3


class IllConditioned(NumericFailure):
    pass


class DegeneratePairing(NumericFailure):
    pass


class BlockInconsistency(NumericFailure):
    pass


class DefectBlowup(NumericFailure):
    pass


class NonFiniteState(NumericFailure):
    pass


class NormDrift(NumericFailure):
    pass


class TakagiFailure(NumericFailure):
    pass


class GaugeObstruction(NumericFailure):
    pass


class CompletionFailure(NumericFailure):
    pass


class GridTooCoarse(NumericFailure):
    pass


# ─── Invariant violations (exit code 1) ─────────────────────────────────────

class InvariantViolation(BogodiagError, AssertionError):
    exit_code = 1


class BoundViolated(InvariantViolation):
    pass
