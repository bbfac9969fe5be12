from typing import Literal

ErrorCode = Literal[
    "config_error",
    "invalid_input",
    "not_converged",
    "not_reproduced",
    "numerical_failure",
    "quadrature_failure",
    "singular",
]

CONFIG_ERROR_EXIT_CODE = 1
NUMERICAL_FAILURE_EXIT_CODE = 2


class AnharmonicError(Exception):
    code: ErrorCode = "numerical_failure"

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


class InvalidInputError(AnharmonicError, ValueError):
    code: ErrorCode = "invalid_input"


class SingularityError(AnharmonicError):
    code: ErrorCode = "singular"


class QuadratureError(AnharmonicError):
    code: ErrorCode = "quadrature_failure"

    def __init__(self, message: str, *, estimate: float, error: float) -> None:
        super().__init__(f"{message} (best estimate {estimate:.12g}, error {error:.3g})")
        self.estimate = estimate
        self.error = error


class ConvergenceError(AnharmonicError):
    code: ErrorCode = "not_converged"

    def __init__(self, message: str, *, best: tuple[float, ...], value: float) -> None:
        super().__init__(message)
        self.best = best
        self.value = value


class ConstraintError(AnharmonicError):
    """An orthogonality or positivity constraint cannot be met."""

    code: ErrorCode = "numerical_failure"
