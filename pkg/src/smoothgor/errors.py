"""Exception types raised across the package."""


class LowerDimensional(ValueError):
    """Points do not affinely span the ambient space.

    Use :func:`smoothgor.polytope.restrict_to_span` to re-coordinatize.
    """


class NoInteriorPoint(ValueError):
    pass


class OutOfRange(ValueError):
    """Parameters outside the range where a construction applies."""


class DivisibilityError(ValueError):
    pass


class GorensteinConditionViolated(ValueError):
    pass


class ExponentRangeViolation(ArithmeticError):
    """A stringy E-polynomial left the box ``[0, n]^2`` of exponents."""


class NotEulerian(ValueError):
    pass


class BoxPossiblyInsufficient(UserWarning):
    """An accepted vertex touches the user-supplied coordinate box."""


class PolytopeFormatError(ValueError):
    """Malformed polytope document; ``line`` and ``column`` locate the problem."""

    def __init__(self, msg: str, line: int = 0, column: int = 0):
        super().__init__(f"{msg} (line {line}, column {column})" if line else msg)
        self.line = line
        self.column = column
