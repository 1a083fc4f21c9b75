"""Exception types shared across the package.

Everything that represents a violated mathematical precondition derives
from DomainError so the command line layer can map it to a single exit
status, distinct from I/O and parse failures.
"""

__all__ = [
    "DomainError",
    "DimensionMismatchError",
    "NonErgodicError",
    "UnstableStepError",
    "NotStationaryError",
    "ZeroProbabilityError",
    "BadParamsError",
    "BadGridError",
    "BadCoefficientsError",
    "SupportMismatchError",
    "ArityMismatchError",
    "TooManyLettersError",
    "NotMarkovError",
    "MissingInitError",
    "EmptySeriesError",
    "NotSymmetricError",
    "OutOfValidityRangeError",
    "PsiAboveOneError",
    "ParseError",
]


class DomainError(Exception):
    """A mathematically invalid input or an unsatisfiable precondition."""


class DimensionMismatchError(DomainError):
    """Operands have incompatible shapes or state-space sizes."""


class NonErgodicError(DomainError):
    """The chain has no unique everywhere-positive stationary distribution."""


class UnstableStepError(DomainError):
    """Integrator step size too large for the given rates."""


class NotStationaryError(DomainError):
    """A distribution claimed to be stationary fails the balance residual."""


class ZeroProbabilityError(DomainError):
    """An entry required to be strictly positive is zero."""


class BadParamsError(DomainError):
    """Invalid construction parameters."""


class BadGridError(BadParamsError):
    """Invalid sweep grid specification."""


class BadCoefficientsError(BadParamsError):
    """Mixture coefficients violate their sign or length constraints."""


class SupportMismatchError(DomainError):
    """A measure puts mass where its reference vanishes, or an argument
    falls outside the domain of the convex function."""


class ArityMismatchError(DomainError):
    """Number of measures does not match the arity of the convex function."""


class TooManyLettersError(DomainError):
    """Exact enumeration over letter tuples was requested beyond the cap."""


class NotMarkovError(DomainError):
    """A joint triple distribution does not factor as a Markov chain."""


class MissingInitError(DomainError):
    """A trace kind needs an initialization that was not supplied."""


class EmptySeriesError(DomainError):
    """A verdict was requested on a series with no points."""


class NotSymmetricError(DomainError):
    """A rate matrix required to be symmetric is not."""


class OutOfValidityRangeError(DomainError):
    """Argument lies outside the range where the formula is valid."""


class PsiAboveOneError(DomainError):
    """Bound value exceeds 1, so no real distortion root exists."""


class ParseError(Exception):
    """Malformed input file or unrecognized option text.

    Deliberately not a DomainError: the CLI reports it with a different
    exit status than a violated mathematical precondition.
    """
