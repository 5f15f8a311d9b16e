"""Exception types shared across the package."""


class CqcapError(Exception):
    """Base class for all library errors."""


class StateValidationError(CqcapError):
    """A matrix failed one of the density-matrix invariants."""


class NotHermitian(StateValidationError):
    """Hermitian defect above tolerance."""


class NotUnitTrace(StateValidationError):
    """Trace differs from one beyond tolerance."""


class NotPSD(StateValidationError):
    """Minimum eigenvalue below the negative tolerance."""


class DimensionMismatch(CqcapError):
    """Operands carry incompatible Hilbert-space dimensions."""


class LengthMismatch(CqcapError):
    """A weight vector and a state list disagree in length."""


class UnknownLetter(CqcapError):
    """A letter is not part of the referenced alphabet."""


class AxisOutOfRange(CqcapError):
    """An axis index is outside a channel's arity."""


class ShapeMismatch(CqcapError):
    """Structured data has inconsistent shapes."""


class InvalidEnsemble(CqcapError):
    """Random-state ensemble name is not recognized."""


class SupportError(CqcapError):
    """A prior with zero mass was passed where strict positivity is required."""


class NumericalBreakdown(CqcapError):
    """An intermediate quantity failed validation during a solve."""


class ParseError(CqcapError):
    """A file could not be read or decoded."""


class SchemaError(CqcapError):
    """A decoded file has wrong keys, types, or shapes."""


class StateError(CqcapError):
    """A decoded state violates the density-matrix invariants."""
