class CwdwError(Exception):
    """
    Base class for every error raised by the workbench.

    The CLI maps each subclass onto a stable process exit code.
    """

    exit_code = 1


class InvalidParameterError(CwdwError, ValueError):
    """Parameters violate a precondition (odd prime p, m, k, code regime, sample size)."""

    exit_code = 2


class BudgetExceededError(CwdwError):
    """An exhaustive computation would exceed the configured operation budget."""

    exit_code = 3


class VerificationError(CwdwError):
    """At least one hard verification assertion failed."""

    exit_code = 4


class ConsistencyError(CwdwError, ArithmeticError):
    """An internal invariant broke. Always an implementation bug, never a data condition."""

    exit_code = 1


class FieldArithmeticError(CwdwError, ZeroDivisionError):
    """Inversion of zero or division by the zero polynomial."""

    exit_code = 1
