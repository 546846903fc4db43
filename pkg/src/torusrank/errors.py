"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Matrix or vector dimensions do not fit the operation."""


class DegeneracyError(ValueError):
    """Input is rank deficient where full rank is required."""


class DomainError(ValueError):
    """Parameter outside the domain of a construction."""


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed the configured budget."""


class NotACellComplex(ValueError):
    """A quotient identifies the two endpoints of an edge."""


class NoValidOrder(ValueError):
    """Vertex labels are not a total order on some cell."""


class DegenerateSimplexError(ValueError):
    """A lifted simplex has linearly dependent edge vectors."""


class InvalidTriangulation(ValueError):
    """A periodic triangulation fails a combinatorial check."""
