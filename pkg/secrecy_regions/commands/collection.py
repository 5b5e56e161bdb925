"""Collection class for dispatching a run configuration to its command."""

import logging

from ..config import RunConfig
from ..errors import SecrecyError
from .base import BaseCommand, CommandFailure, CommandResult

logger = logging.getLogger(__name__)


class CommandCollection:
    """A collection of commands keyed by name."""

    def __init__(self, *commands: BaseCommand):
        self.commands = commands
        self.command_map = {command.to_params()["name"]: command for command in commands}

    def to_params(self) -> list[dict[str, str]]:
        return [command.to_params() for command in self.commands]

    async def run(
        self, config: RunConfig, *, threads: int = 1, timeout: float | None = None
    ) -> CommandResult:
        command = self.command_map.get(config.command)
        if not command:
            return CommandFailure(error=f"Command {config.command} is invalid", exit_code=2)
        try:
            return await command(config, threads=threads, timeout=timeout)
        except SecrecyError as e:
            logger.debug("%s failed", config.command, exc_info=True)
            return CommandFailure(
                error=e.message,
                system=type(e).__name__,
                exit_code=e.exit_code,
                details=e.details() or None,
            )
