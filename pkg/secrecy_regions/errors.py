from typing import Any, ClassVar


class SecrecyError(Exception):
    """Raised when a computation cannot proceed."""

    exit_code: ClassVar[int] = 1

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def details(self) -> dict[str, Any]:
        """Extra fields for the machine-readable error record."""
        return {}


class DimensionError(SecrecyError):
    """Matrix shapes and subsystem dimension lists disagree."""


class DensityValidationError(SecrecyError):
    """A matrix expected to be a density operator is not one."""

    exit_code = 4


class ChannelError(SecrecyError):
    """Invalid channel parameters or Kraus sets."""


class EnsembleError(SecrecyError):
    """Invalid input ensemble."""


class SubsystemError(SecrecyError):
    """Empty or overlapping subsystem selections."""


class GuardError(SecrecyError):
    """A desk-scale size guard was exceeded."""

    exit_code = 3


class NumericalValidationError(SecrecyError):
    """A computed quantity violates an information-theoretic invariant."""

    exit_code = 4


class MaximalErrorError(SecrecyError):
    """Invalid input to expurgation or the permutation scheme."""


class PermutationBudgetError(SecrecyError):
    """No permutation draw met the maximal-error bound within the retry budget."""

    exit_code = 4

    def __init__(self, message: str, *, attempts: int, best_max_error: float, bound: float):
        super().__init__(message)
        self.attempts = attempts
        self.best_max_error = best_max_error
        self.bound = bound

    def details(self) -> dict[str, Any]:
        return {"attempts": self.attempts, "best_max_error": self.best_max_error, "bound": self.bound}


class ConfigError(SecrecyError):
    """The run configuration is invalid; carries every problem found."""

    exit_code = 2

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems

    def details(self) -> dict[str, Any]:
        return {"problems": list(self.problems)}


class KeyRangeError(SecrecyError):
    """Heisenberg-Weyl exponents or key triples out of range."""
