"""Exception hierarchy.

Every error raised by the library derives from :class:`SpanboundError`, so
callers (the CLI in particular) can map failures to exit codes in one place.
"""


class SpanboundError(Exception):
    """Base class for all library errors."""


class UsageError(SpanboundError):
    """Malformed input or a violated precondition (CLI exit code 2)."""


# backends / scalars
class ReducibleModulus(UsageError):
    pass


class NonPrimeCharacteristic(UsageError):
    pass


class UnsupportedGroupCharacteristic(UsageError):
    pass


class UnsupportedModulus(UsageError):
    pass


class ElementSyntaxError(UsageError, ValueError):
    """Unparseable element text; ``position`` is the 0-based offset of the problem."""

    def __init__(self, message, text="", position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position}: {text[:position]}<HERE>{text[position:]}"
        super().__init__(message)


class ZeroDenominator(UsageError, ZeroDivisionError):
    pass


class UnknownGroupElement(UsageError):
    pass


class BackendMismatch(UsageError):
    pass


class ZeroInverse(UsageError, ZeroDivisionError):
    pass


class NotAUnit(UsageError):
    pass


class UnsupportedInverse(UsageError):
    pass


# linear algebra
class ShapeMismatch(UsageError):
    pass


class DuplicateAlpha(UsageError):
    pass


# spans / structure
class EmptySet(UsageError):
    pass


class UnsupportedBackend(UsageError):
    pass


class NotStabilized(UsageError):
    pass


class NotDivisionClosed(UsageError):
    pass


class BudgetExceeded(SpanboundError):
    """A configured enumeration or iteration budget ran out (CLI exit code 3)."""


# theorems
class NonCommutativeBackend(UsageError):
    pass


class InfiniteFieldExhaustive(UsageError):
    pass


class HeuristicRho(UsageError):
    pass


class CommutationFailure(UsageError):
    pass


class NonCommutativeA(UsageError):
    pass


class NonCommutativePrefix(UsageError):
    pass


class WrongArity(UsageError):
    pass


class OneElement(UsageError):
    pass


class HypothesisFailed(UsageError):
    pass


class UnitPreconditionFailed(UsageError):
    pass


class NonAbelianForThAlg1(UsageError):
    pass


class WitnessCheckFailed(SpanboundError):
    """An internally produced witness failed re-verification. Always a bug."""


# connectivity
class ZeroSubspace(UsageError):
    pass


class LambdaTooLarge(UsageError):
    pass


# groups
class GroupMismatch(UsageError):
    pass


class NotAGroup(UsageError):
    pass


class TorsionPresent(UsageError):
    pass


class NonAbelianGroup(UsageError):
    pass


# cli
class IncompatibleChecker(UsageError):
    pass


class ReportParseError(UsageError):
    pass
