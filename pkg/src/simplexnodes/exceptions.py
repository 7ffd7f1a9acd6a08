"""Exception types raised by :mod:`simplexnodes`."""


class SimplexNodesError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateDegreeError(SimplexNodesError, ValueError):
    """A node family was asked for a degree it cannot represent."""


class UnsupportedError(SimplexNodesError, ValueError):
    """Degree, dimension or geometry outside the supported range."""


class NumericalError(SimplexNodesError, ArithmeticError):
    """An iteration failed to converge or a matrix property was violated."""


class DegenerateFamilyError(NumericalError):
    """All recursion weights vanished for some multi-index."""


class UnisolvencyError(NumericalError):
    """The node set does not determine a unique interpolant."""

    def __init__(self, message, condition_number=None):
        super().__init__(message)
        self.condition_number = condition_number


class DomainError(SimplexNodesError, ValueError):
    """A point lies outside the simplex beyond the allowed tolerance."""


class NodeFileError(SimplexNodesError, ValueError):
    """A node-set file is malformed or fails validation."""
