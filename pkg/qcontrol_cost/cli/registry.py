"""
Subcommand registry for the qcc command line

Each subcommand registers a handler and an argument configurer with a
decorator; `cli.main` builds the argparse tree from the registry and
dispatches to the handler.
"""
import argparse
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

Handler = Callable[[argparse.Namespace], int]
Configurer = Callable[[argparse.ArgumentParser], None]


@dataclass(frozen=True)
class Command:
    name: str
    help: str
    handler: Handler
    configure: Optional[Configurer] = None


class CommandRegistry:
    """Registry for subcommand handlers"""

    def __init__(self):
        self._commands: Dict[str, Command] = {}

    def register_command(self, name: str, help: str, handler: Handler,
                         configure: Optional[Configurer] = None):
        """Register a handler for a subcommand"""
        if name in self._commands:
            raise ValueError(f"Subcommand '{name}' registered twice")
        self._commands[name] = Command(name, help, handler, configure)

    def get_available_commands(self) -> List[str]:
        """Get list of all registered subcommand names, in registration order"""
        return list(self._commands.keys())

    def build_parsers(self, subparsers) -> None:
        for command in self._commands.values():
            sub = subparsers.add_parser(command.name, help=command.help,
                                        description=command.help)
            if command.configure is not None:
                command.configure(sub)
            sub.set_defaults(command=command.name)

    def execute(self, args: argparse.Namespace) -> int:
        """Run the handler selected by the parsed arguments"""
        return self._commands[args.command].handler(args)


# Global registry instance
_registry = CommandRegistry()


def register_command(name: str, help: str, configure: Optional[Configurer] = None):
    """Decorator for registering subcommand handlers"""
    def decorator(handler: Handler):
        _registry.register_command(name, help, handler, configure)
        return handler
    return decorator


def get_registry() -> CommandRegistry:
    """Get the global command registry instance"""
    return _registry


def get_registered_commands() -> List[str]:
    """Get all registered subcommand names"""
    return _registry.get_available_commands()
