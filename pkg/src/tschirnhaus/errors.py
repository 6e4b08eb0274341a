"""Exception types shared across the library."""


class TschirnhausError(Exception):
    """Base class for all library errors."""


class NonConvergence(TschirnhausError):
    """Root finding failed after the precision escalation budget was spent."""


class IllConditioned(TschirnhausError):
    """A tolerance-based degree/rank decision was ambiguous at the current precision."""


class SingularInterpolation(TschirnhausError):
    """Interpolation sample design was degenerate even after resampling."""


class IdenticallyZero(TschirnhausError):
    """A resultant vanished identically, signalling a common component."""


class CommonComponent(TschirnhausError):
    """Two curves share a component; no isolated intersection points exist."""


class QNotOnSystem(TschirnhausError):
    """The base point of a derived system does not satisfy the system."""


class GenericityFailure(TschirnhausError):
    """Randomized choices stayed degenerate for every retry."""


class AmbientTooSmall(TschirnhausError):
    """The ambient dimension is below the bound required by the construction."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class RankCollapse(TschirnhausError):
    """A quadratic form was too degenerate for hyperbolic-pair extraction."""


class EmptyGCD(TschirnhausError):
    """A fiber GCD was trivial: the value is not a root to tolerance."""


class DomainError(TschirnhausError):
    """Arguments outside the domain in which a formula is valid."""
