from abc import ABCMeta, abstractmethod
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Any, ClassVar

from ..config import Command, RunConfig


class BaseCommand(metaclass=ABCMeta):
    """Abstract base class for the commands a run configuration can select."""

    name: ClassVar[Command]
    description: ClassVar[str] = ""

    @abstractmethod
    async def __call__(
        self, config: RunConfig, *, threads: int = 1, timeout: float | None = None
    ) -> "CommandResult":
        """Executes the command for the given configuration."""
        ...

    def to_params(self) -> dict[str, str]:
        return {"name": self.name.value, "description": self.description}


@dataclass(kw_only=True, frozen=True)
class CommandResult:
    """Represents the result of a command: named artifacts plus a summary document."""

    artifacts: Mapping[str, str] | None = None
    summary: Mapping[str, Any] | None = None
    error: str | None = None
    system: str | None = None


@dataclass(kw_only=True, frozen=True)
class CommandFailure(CommandResult):
    """A CommandResult that represents a failure; `details` feeds the error record."""

    exit_code: int = 1
    details: Mapping[str, Any] | None = None
