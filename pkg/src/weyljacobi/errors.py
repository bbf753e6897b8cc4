"""Exception hierarchy for weyljacobi."""


class WeylJacobiError(Exception):
    """Base class of all errors raised by the library."""


class InputError(WeylJacobiError, ValueError):
    """Invalid input data (bad shape, violated invariant)."""


class NumericError(WeylJacobiError, ArithmeticError):
    """A numerical procedure could not produce a trustworthy result."""


class NotHermitian(InputError):
    pass


class NoConvergence(NumericError):
    pass


class NotScalarPolar(NumericError):
    """C C^* is not a scalar multiple of the identity."""


class SingularBlock(NumericError):
    """A 2x2 block is numerically singular; recursion stops here."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class OnCut(InputError):
    """Argument lies on the branch cut [0, +inf)."""


class DimensionTooLarge(InputError):
    pass


class IndexOutOfRange(InputError):
    pass


class PoleProximity(NumericError):
    """Evaluation point too close to an atom of the measure."""


class TruncationTooSmall(InputError):
    pass


class InvalidMeasure(InputError):
    pass


class SingularWeylValue(NumericError):
    pass


class ParseError(InputError):
    """File could not be parsed (malformed JSON)."""


class SchemaError(InputError):
    """File parsed but does not match the expected schema."""
