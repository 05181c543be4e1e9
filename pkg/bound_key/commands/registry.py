"""Command registry for the bound_key CLI.

Thread-safe name -> command lookup with a single synchronous entrypoint,
``execute``.
"""
from __future__ import annotations

import threading
from typing import Dict, List, Optional

from bound_key.commands.base import BaseCommand
from bound_key.errors import ConfigError
from bound_key.reports.report import Report
from bound_key.utils.config import RunConfig


class CommandRegistry:
    def __init__(self) -> None:
        self._commands: Dict[str, BaseCommand] = {}
        self._lock = threading.RLock()

    def register_command(self, command: BaseCommand) -> None:
        """Raises ValueError for a missing name or a duplicate registration."""
        with self._lock:
            name = getattr(command, "name", None)
            if not name or not isinstance(name, str):
                raise ValueError("Command must have a non-empty 'name' attribute")
            if name in self._commands:
                raise ValueError(f"Command with name '{name}' is already registered")
            self._commands[name] = command

    def get_command(self, name: str) -> Optional[BaseCommand]:
        with self._lock:
            return self._commands.get(name)

    def list_commands(self) -> List[Dict[str, str]]:
        with self._lock:
            return [{"name": n, "description": c.description} for n, c in sorted(self._commands.items())]

    def execute(self, config: RunConfig) -> Report:
        command = self.get_command(config.command)
        if command is None:
            raise ConfigError(f"Command '{config.command}' not found")
        return command.run(config)


_default_registry: Optional[CommandRegistry] = None


def default_registry() -> CommandRegistry:
    global _default_registry
    if _default_registry is None:
        from bound_key.commands.privacy import CcqCommand, PbitMixtureCommand
        from bound_key.commands.protocol import CriterionCommand, ProtocolCommand
        from bound_key.commands.states import ExportCommand, PptCommand, VerifyStateCommand

        registry = CommandRegistry()
        for command in (
            VerifyStateCommand(),
            PptCommand(),
            CriterionCommand(),
            ProtocolCommand(),
            CcqCommand(),
            PbitMixtureCommand(),
            ExportCommand(),
        ):
            registry.register_command(command)
        _default_registry = registry
    return _default_registry
