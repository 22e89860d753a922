"""
Exceptions shared by every backend module.

The command line maps the three families to exit codes:
ParseError -> 2, DomainError / SearchBudgetExceeded -> 3, AmbiguityError -> 4.
"""

# ------------------ Class Exceptions ------------------
class CuspCountError(Exception):
    """Base class for every error raised by the backend."""
    pass


class ParseError(CuspCountError, ValueError):
    """Raised when a textual shape, class or tuple cannot be parsed."""

    def __init__(self, message, text='', position=0):
        super().__init__(f"{message} (at position {position} in '{text}')")
        self.text = text
        self.position = position


class DomainError(CuspCountError, ValueError):
    """Raised when an input lies outside the domain of an operation."""
    pass


class UnsupportedDegree(DomainError):
    """Raised when an operand has a higher power of delta than the operation supports."""
    pass


class NotCoprime(DomainError):
    """Raised when a (p, q) pair is required to be coprime and is not."""
    pass


class NegativeCount(DomainError):
    """Raised when a count given by the adjunction formula would be negative."""
    pass


class NonIntegral(DomainError):
    """Raised when a count given by the adjunction formula is not an integer."""
    pass


class NonIntegralData(DomainError):
    """Raised when a recursion quadruple fails an integrality check."""
    pass


class NoIntegralSolution(DomainError):
    """Raised when neither sign choice gives integral (d, m)."""
    pass


class NotSquare(DomainError):
    """Raised when the discriminant p^2 - 6pq + q^2 + 8 is not a perfect square."""
    pass


class RatioTooSmall(DomainError):
    """Raised when the R symmetry is applied to a pair with p/q <= 6."""
    pass


class SearchBudgetExceeded(CuspCountError):
    """Raised when an exhaustive search examines more candidates than allowed."""

    def __init__(self, message, examined=0):
        super().__init__(message)
        self.examined = examined


class AmbiguityError(CuspCountError):
    """Base class for ties that exact delta comparison cannot break."""
    pass


class TieInSpectrum(AmbiguityError):
    """Raised when two action spectrum entries coincide; perturb the shape by delta."""
    pass


class AmbiguousMaximizer(AmbiguityError):
    """Raised when two lattice tuples attain the same max-min value."""
    pass


class AmbiguousMinimizer(AmbiguityError):
    """Raised when two axes attain the same minimum action."""
    pass
