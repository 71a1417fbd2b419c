"""Exception hierarchy shared by every module."""


class ZetaMomentsError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ZetaMomentsError, ValueError):
    """An argument lies outside the region where an operation is defined."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole."""


class AccuracyDomainError(DomainError):
    """Argument is outside the region where the declared accuracy holds."""


class CapacityError(ZetaMomentsError, MemoryError):
    """A table or work array would exceed the configured size limit."""


class LengthMismatchError(ZetaMomentsError, ValueError):
    pass


class ContourError(ZetaMomentsError, ArithmeticError):
    """A contour integrand produced a non-finite value."""


class BudgetExceededError(ZetaMomentsError, RuntimeError):
    """Quadrature ran out of function evaluations before reaching tolerance."""


class ToleranceError(ZetaMomentsError, ArithmeticError):
    """A requested tolerance cannot be certified with the given cutoffs."""
