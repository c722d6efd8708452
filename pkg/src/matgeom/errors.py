"""Exception types shared across the package."""


class MatGeomError(Exception):
    """Base class for domain errors (CLI exit code 2)."""


class FieldMismatch(MatGeomError):
    pass


class DivisionByZero(MatGeomError, ZeroDivisionError):
    pass


class InvalidField(MatGeomError):
    pass


class ShapeMismatch(MatGeomError):
    pass


class CapExceeded(MatGeomError):
    """An enumeration would exceed the configured state-count cap."""


class NotAdjacent(MatGeomError):
    pass


class InvalidWitness(MatGeomError):
    pass


class NotAdjacentSet(MatGeomError):
    pass


class InvalidL(MatGeomError):
    pass


class ImproperColouring(MatGeomError):
    pass


class TargetTooSmall(MatGeomError):
    pass


class InvalidProblem(MatGeomError):
    pass


class MalformedTable(MatGeomError):
    pass


class PreconditionError(MatGeomError):
    pass


class TheoremViolation(MatGeomError):
    """A machine check contradicted a statement it was supposed to confirm."""
