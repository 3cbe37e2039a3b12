"""Exception types shared across the package."""


class QmtError(Exception):
    """Base class for all library errors."""


class ArityMismatchError(QmtError):
    """Events, vectors or systems sized for different atom counts were mixed."""


class BruteForceLimitError(QmtError):
    """An exhaustive enumeration or materialization exceeds its configured limit."""


class AxiomViolationError(QmtError):
    """A matrix failed Hermiticity, normalisation, or a derived reality check."""


class SumRuleViolationError(QmtError):
    """A measure table breaks the quantal sum rule on some disjoint triple."""


class DocumentError(QmtError):
    """A system document could not be parsed or fails its schema."""


class PreconditionError(QmtError):
    """The input system lies outside the class a construction applies to."""


class SearchExhaustedError(QmtError):
    """A bounded search finished without finding the required object."""


class QCapError(QmtError):
    """The self-composition exponent search exceeded its cap."""
