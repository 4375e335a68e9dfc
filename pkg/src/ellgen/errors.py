"""Exception types shared across the package."""

from __future__ import annotations


class EllgenError(Exception):
    """Base class for all library errors."""


class ZeroDenominator(EllgenError, ZeroDivisionError):
    pass


class NonUnitLeadingCoefficient(EllgenError, ArithmeticError):
    pass


class OffsetMismatch(EllgenError, ValueError):
    """Two q-series whose offsets differ by a non-integer were combined."""


class NonconvergentDomain(EllgenError, ValueError):
    """Raised when Im(tau) <= 0, so |q| >= 1 and nothing converges."""


class ZeroWeight(EllgenError, ValueError):
    pass


class PoleProximity(EllgenError, ArithmeticError):
    """A theta denominator is within the pole threshold of zero.

    ``slot`` is the weight index (0-based) inside the vertex and ``vertex``
    the vertex id, when known.
    """

    def __init__(self, message: str, slot: int | None = None, vertex: str | None = None):
        super().__init__(message)
        self.slot = slot
        self.vertex = vertex


class QuadratureNonconvergence(EllgenError, ArithmeticError):
    pass


class DiagramSyntaxError(EllgenError, ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class DuplicateId(EllgenError, ValueError):
    pass


class DanglingEdgeRef(EllgenError, ValueError):
    pass


class SlotReused(EllgenError, ValueError):
    pass


class InvalidDiagram(EllgenError, ValueError):
    def __init__(self, message: str, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class UnknownBuiltin(EllgenError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""
