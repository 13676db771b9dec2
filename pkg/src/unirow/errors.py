"""Exception types shared across the package.

Budget exhaustion and mathematical refutation are kept apart on purpose:
``Undecided`` and ``BudgetExhausted`` never mean "false".
"""


class UnirowError(Exception):
    pass


class DescriptorMismatch(UnirowError):
    pass


class InvalidDescriptor(UnirowError):
    pass


class ParseError(UnirowError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class Undecided(UnirowError):
    """A bounded search ran out of budget without an answer."""


class Unsupported(UnirowError):
    pass


class NotUnimodular(UnirowError):
    pass


class NotRelative(UnirowError):
    pass


class NotUnipotent(UnirowError):
    pass


class BudgetExhausted(UnirowError):
    pass


class NoUnitWitness(UnirowError):
    pass


class PreconditionError(UnirowError):
    pass


class WitnessMismatch(UnirowError):
    pass


class SizeMismatch(UnirowError):
    pass


class ShapeMismatch(UnirowError):
    pass


class NotASquarePresentation(UnirowError):
    pass


class CapExceeded(UnirowError):
    pass


class NotEquivalent(UnirowError):
    pass


class RowAbsent(UnirowError):
    pass


class HypothesisViolated(UnirowError):
    pass


class SaturationUndecided(UnirowError):
    pass


class NoMonicFound(UnirowError):
    pass


class NoExponentInWindow(UnirowError):
    pass


class WindowViolation(UnirowError):
    pass


class QuotientUnsupported(UnirowError):
    pass


class ConductorUnsatisfied(UnirowError):
    pass


class VerificationFailure(UnirowError):
    pass
