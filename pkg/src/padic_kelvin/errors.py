"""Exception hierarchy shared by all modules."""


class PadicKelvinError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PadicKelvinError, ValueError):
    """Input outside the domain of an operation (non-prime p, mixed primes, ...)."""


class PrecisionError(PadicKelvinError, ArithmeticError):
    """A question cannot be decided at the available p-adic precision."""


class DivergenceError(PadicKelvinError, ArithmeticError):
    """A series or shell sum has no convergence region (or a pole was hit)."""


class ResourceError(PadicKelvinError, RuntimeError):
    """An expansion would exceed the configured size guard."""


class PreconditionError(PadicKelvinError, ValueError):
    """A documented precondition of a verification routine is violated."""
