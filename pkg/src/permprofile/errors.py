"""Exception types shared across the package."""


class PermProfileError(Exception):
    """Base class for all package-specific errors."""


class NotABijection(PermProfileError, ValueError):
    """One-line notation with a duplicate or out-of-range value."""


class BadPositions(PermProfileError, ValueError):
    """Position indices not strictly increasing or out of range."""


class DegeneratePoints(PermProfileError, ValueError):
    """Plane points with tied y- or z-coordinates."""


class TiesPresent(DegeneratePoints):
    """Paired samples contain ties and no tie policy was requested."""


class TooLarge(PermProfileError):
    """Requested job exceeds the configured cost budget."""


class NotRepresentable(PermProfileError, ValueError):
    """Square root not expressible over the fixed radical basis."""


class MissingGenerators(PermProfileError, LookupError):
    """No embedded or plugged-in generator matrices for this size."""


class HomomorphismViolation(PermProfileError):
    """Generator matrices fail to define a representation."""


class InvalidTableau(PermProfileError, ValueError):
    """Row data does not form a tableau of the claimed shape."""


class DegreeViolation(PermProfileError):
    """Interpolated moment polynomial exceeds its degree bound."""


class Diverges(PermProfileError):
    """A normalized limit does not exist (degree bound violated)."""


class InsufficientData(PermProfileError):
    """Not enough usable grid points to fit a scaling exponent."""
