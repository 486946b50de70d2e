"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: contract and parse errors -> 1,
resource errors -> 2, verification failures -> 3.
"""


class QBenchError(Exception):
    """Base class for all library errors."""


class ContractError(QBenchError, ValueError):
    """An input violates an operation's precondition."""


class ParseError(ContractError):
    """Malformed textual input (braid words, JSON specs)."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (token {position})"
        super().__init__(message)


class ResourceError(QBenchError):
    """A computation would exceed its dense-simulation budget."""


class NumericError(QBenchError, ArithmeticError):
    """A numerical routine failed to converge."""

    def __init__(self, message: str, iterations: int | None = None):
        self.iterations = iterations
        if iterations is not None:
            message = f"{message} after {iterations} iterations"
        super().__init__(message)


class DegeneracyError(NumericError):
    """A spectral cut falls inside a degenerate eigenvalue block."""


class ConvergenceError(NumericError):
    """An iteration did not settle, or a series precondition such as ‖λV‖ < γ/4 fails.

    When the precondition is the issue, both norms are kept on the exception.
    """

    def __init__(
        self,
        message: str,
        iterations: int | None = None,
        perturbation_norm: float | None = None,
        gap: float | None = None,
    ):
        self.perturbation_norm = perturbation_norm
        self.gap = gap
        super().__init__(message, iterations)


class ConfigurationError(QBenchError):
    """No convention assignment reproduces the reference values."""


class VerificationError(QBenchError):
    """A numerical cross-check failed."""
