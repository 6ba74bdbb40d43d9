"""Exception hierarchy.

Every error a caller can act on has its own class; the CLI reports the class
name verbatim, so names double as stable error codes.
"""


class SpicError(Exception):
    """Base class for all library errors."""


class ShapeMismatch(SpicError, ValueError):
    pass


class NonCommuting(SpicError, ValueError):
    pass


class IrrationalSpectrum(SpicError):
    pass


class RingMismatch(SpicError, ValueError):
    pass


class ParseError(SpicError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class InfiniteStaircase(SpicError):
    pass


class NotMonomial(SpicError, ValueError):
    pass


class IllDefinedMap(SpicError, ValueError):
    pass


class NotContained(SpicError, ValueError):
    pass


class InfiniteDimensional(SpicError):
    pass


class NotCofinite(SpicError):
    pass


class NoStabilization(SpicError):
    pass


class DimensionMismatch(SpicError, ValueError):
    pass


class ZeroModule(SpicError):
    pass


class NotACoordinateSystem(SpicError):
    pass


class ComponentsUnknown(SpicError):
    pass


class BadCandidate(SpicError, ValueError):
    pass


class PointOffSpectrum(SpicError):
    pass


class NotOnComponent(SpicError, ValueError):
    pass


class NotGeneric(SpicError):
    pass


class NotFinite(SpicError):
    pass


class GenericSampleDisagreement(SpicError):
    pass


class IrrationalPreimage(SpicError):
    pass


class NotHomogeneous(SpicError, ValueError):
    pass


class Unsupported(SpicError):
    """Query not defined for this kind of operator model."""
