"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class RuledRicciError(Exception):
    """Base class for all package errors."""


class ExprError(RuledRicciError):
    """Problem with a user-supplied expression, located by byte offset."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)


class ExprSyntaxError(ExprError):
    pass


class UnknownIdentifierError(ExprError):
    pass


class ArityError(ExprError):
    pass


class DomainError(RuledRicciError, ValueError):
    """A function was evaluated outside its real domain."""


class UnboundParameterError(RuledRicciError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0])


class NonRegularCurveError(RuledRicciError):
    """Vanishing speed or curvature where a regular point was required."""


class SphericalCurveError(RuledRicciError):
    """Input curve fails the unit-sphere / arc-length / regularity hypotheses."""

    def __init__(self, message: str, check=None):
        super().__init__(message)
        self.check = check


class GreatCircleError(SphericalCurveError):
    """Binormal candidate is a great circle: torsion construction is singular."""


class NormalizationError(RuledRicciError):
    """Ruled patch violates |beta| = |beta'| = 1, <beta, beta'> = 0 or striction."""


class PreconditionError(RuledRicciError):
    pass


class MarginError(PreconditionError):
    """Finite-difference stencil leaves the field's domain."""


class NumericError(RuledRicciError):
    """Non-finite value produced during evaluation."""
