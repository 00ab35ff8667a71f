"""Exceptions raised by polymajorant.

Each class refines the builtin it is most often caught as, so callers that
only care about ``ValueError`` or ``RuntimeError`` keep working.
"""


class DomainError(ValueError):
    """Raised when a point lies outside the domain of a piecewise cubic."""
    pass


class ContinuityError(ValueError):
    """Raised when adjacent pieces disagree in value or slope at a knot."""

    def __init__(self, knot_index: int, knot: float, kind: str, jump: float):
        self.knot_index = knot_index
        self.knot = knot
        self.kind = kind
        self.jump = jump
        super().__init__(
            f"{kind} jump of {jump:.3e} at knot {knot_index} (x = {knot!r})"
        )


class InputFormatError(ValueError):
    """Raised when a JSON document does not match the expected schema."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class SplineInputError(ValueError):
    """Raised when spline nodes, values or mesh parameters are invalid."""
    pass


class DegenerateDegreeError(ArithmeticError):
    """Raised when a cubic's leading coefficient vanishes and the sextic does not apply."""
    pass


class ContractViolation(RuntimeError):
    """Raised when an internal precondition between modules is broken."""
    pass
